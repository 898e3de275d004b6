"""
Complex Hermitian linear algebra used by the metrics and solvers.

Conventions
-----------
* Eigenvalues are returned in DESCENDING order, so the smallest eigenvalue
  is always the last one (index ``N - 1``).
* Eigenvectors are made deterministic: inside every cluster of equal
  eigenvalues an orthonormal basis is rebuilt from the canonical basis
  vectors in index order, and every column is phase-rotated so that its
  first non-negligible component is real positive.  ``eigh(np.eye(3))``
  therefore returns the identity.
"""

from typing import NamedTuple, Tuple

import numpy as np
import scipy.linalg as sl

from .errors import DomainError, NumericalError

__all__ = [
    "EigenDecomposition",
    "hermitian",
    "is_hermitian",
    "eigh",
    "min_eigpair",
    "solve_hpd",
    "logdet2_psd_plus",
    "psd_sqrt",
    "unitary_with_last_column",
    "random_unitary",
]

HERMITIAN_ATOL = 1e-12
PSD_CLAMP = 1e-10
PSD_REJECT = 1e-6
_TIE_RTOL = 1e-10
_PHASE_ATOL = 1e-12


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian(data) -> np.ndarray:
    """Return ``(H + H^H) / 2`` as a complex square array."""
    H = np.array(data, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {H.shape}")
    return 0.5 * (H + H.conj().T)


def is_hermitian(H, atol=HERMITIAN_ATOL) -> bool:
    H = np.asarray(H)
    return H.ndim == 2 and H.shape[0] == H.shape[1] and bool(
        np.all(np.abs(H - H.conj().T) <= atol))


def _phase_fix(v: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(np.abs(v) > _PHASE_ATOL * max(1.0, np.abs(v).max()))
    if idx.size == 0:
        return v
    lead = v[idx[0]]
    return v * (abs(lead) / lead)


def _canonical_basis(V: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of span(V) (V has orthonormal columns)."""
    n, k = V.shape
    P = V @ V.conj().T
    Q = np.zeros((n, 0), dtype=complex)
    for j in range(n):
        if Q.shape[1] == k:
            break
        r = P[:, j].copy()
        for _ in range(2):
            r -= Q @ (Q.conj().T @ r)
        nr = np.linalg.norm(r)
        if nr > 1e-6:
            Q = np.column_stack([Q, r / nr])
    if Q.shape[1] != k:
        raise NumericalError("could not rebuild a degenerate eigenspace")
    return Q


def eigh(H) -> EigenDecomposition:
    """Hermitian eigendecomposition with descending, tie-broken ordering.

    Examples
    --------
    >>> lam, U = eigh(np.ones((2, 2)))
    >>> np.round(lam, 12)
    array([2., 0.])
    """
    H = hermitian(H)
    try:
        lam, U = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition did not converge: {exc}") from exc
    lam = lam[::-1].copy()
    U = U[:, ::-1].copy()

    scale = max(1.0, float(np.max(np.abs(lam)))) if lam.size else 1.0
    n = lam.size
    i = 0
    while i < n:
        j = i + 1
        while j < n and lam[i] - lam[j] <= _TIE_RTOL * scale:
            j += 1
        if j - i > 1:
            U[:, i:j] = _canonical_basis(U[:, i:j])
            lam[i:j] = lam[i:j].mean()
        for c in range(i, j):
            U[:, c] = _phase_fix(U[:, c])
        i = j
    return EigenDecomposition(lam, U)


def min_eigpair(H) -> Tuple[float, np.ndarray]:
    """Smallest eigenvalue and its eigenvector, consistent with :func:`eigh`."""
    lam, U = eigh(H)
    return float(lam[-1]), U[:, -1].copy()


def solve_hpd(H, b) -> np.ndarray:
    """Solve ``H x = b`` for Hermitian positive definite ``H`` (Cholesky)."""
    H = hermitian(H)
    n = H.shape[0]
    tr = float(np.real(np.trace(H)))
    if not tr > 0 or np.linalg.eigvalsh(H)[0] <= 1e-12 * tr / n:
        raise DomainError("matrix is not positive definite")
    try:
        c = sl.cho_factor(H, lower=True, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise DomainError(f"matrix is not positive definite: {exc}") from exc
    return sl.cho_solve(c, np.asarray(b, dtype=complex))


def logdet2_psd_plus(A) -> float:
    """``log2 det(I + A)`` for a Hermitian PSD matrix ``A``."""
    lam = np.linalg.eigvalsh(hermitian(A))
    if lam.size and lam[0] < -PSD_REJECT:
        raise DomainError(f"matrix is not PSD (eigenvalue {lam[0]:.3e})")
    lam = np.clip(lam, 0.0, None)
    return float(np.sum(np.log1p(lam)) / np.log(2.0))


def psd_sqrt(C) -> np.ndarray:
    """A factor ``F`` with ``F F^H = C`` for PSD (possibly singular) ``C``."""
    lam, U = np.linalg.eigh(hermitian(C))
    if lam.size and lam[0] < -PSD_REJECT * max(1.0, abs(lam[-1])):
        raise DomainError(f"covariance is not PSD (eigenvalue {lam[0]:.3e})")
    return U * np.sqrt(np.clip(lam, 0.0, None))


def unitary_with_last_column(u) -> np.ndarray:
    """Unitary matrix whose last column is ``u / ||u||``.

    The other columns come from Gram-Schmidt on the canonical basis vectors
    (in index order), skipping the one most aligned with ``u``; hence
    ``u = e_N`` gives the identity.
    """
    u = np.asarray(u, dtype=complex).ravel()
    nu = np.linalg.norm(u)
    if nu == 0:
        raise DomainError("cannot complete a zero vector to a unitary basis")
    u = u / nu
    n = u.size
    mag = np.abs(u)
    drop = int(np.flatnonzero(mag >= mag.max() - 1e-12)[-1])
    Q = u.reshape(n, 1)
    cols = []
    for j in range(n):
        if j == drop:
            continue
        r = np.zeros(n, dtype=complex)
        r[j] = 1.0
        basis = np.column_stack([Q] + cols) if cols else Q
        for _ in range(2):
            r -= basis @ (basis.conj().T @ r)
        cols.append(r / np.linalg.norm(r))
    return np.column_stack(cols + [u]) if cols else u.reshape(n, 1)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))
