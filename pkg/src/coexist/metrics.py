"""
Figures of merit: radar SINR, comm rates with and without interference,
compound rate, the KL divergence pair of the radar test, and PAPR.

Rates are in bits per channel use (log base 2); divergences in nats.
"""

import math
from typing import NamedTuple, Tuple

import numpy as np
import scipy.linalg as sl

from .errors import DomainError, NumericalError
from .linalg import hermitian, logdet2_psd_plus, solve_hpd
from .scenario import Design, InterferenceKind, Scenario

__all__ = [
    "RatePoint",
    "interference_plus_noise",
    "sinr",
    "rate0",
    "rate1",
    "rate1_general",
    "rate1_coherent",
    "rate1_incoherent",
    "rate_point",
    "compound_rate",
    "kl_divergences",
    "papr",
    "mutual_information_bounds",
]

_LOG2 = math.log(2.0)


class RatePoint(NamedTuple):
    r0: float
    r1: float


def interference_plus_noise(sc: Scenario, d: Design) -> np.ndarray:
    """Radar disturbance covariance ``var_g R_x + var_c s s^H + M``."""
    s = d.s
    return sc.var_g * d.R_x + sc.var_c * np.outer(s, s.conj()) + sc.noise


def sinr(sc: Scenario, d: Design) -> float:
    """Radar output SINR ``var_a s^H (var_g R_x + var_c s s^H + M)^{-1} s``."""
    if not np.any(d.s):
        return 0.0
    try:
        y = solve_hpd(interference_plus_noise(sc, d), d.s)
    except DomainError as exc:
        raise NumericalError(f"singular radar disturbance covariance: {exc}") from exc
    return max(0.0, float(sc.var_a * np.vdot(d.s, y).real))


def _check_psd(R_x) -> np.ndarray:
    R = hermitian(R_x)
    lam = np.linalg.eigvalsh(R)
    if lam[0] < -1e-6 * max(1.0, lam[-1]):
        raise DomainError(f"R_x is not PSD (eigenvalue {lam[0]:.3e})")
    return R


def rate0(sc: Scenario, R_x) -> float:
    """Interference-free rate ``(1/N) log2 det(I + (h2/var_v) R_x)``."""
    R = _check_psd(R_x)
    return logdet2_psd_plus(sc.h2 / sc.var_v * R) / R.shape[0]


def rate1_general(sc: Scenario, d: Design, R_f=None) -> float:
    """Interfered rate for an arbitrary ``R_f``, by Cholesky whitening.

    ``det(I + c R_x K^{-1}) = det(I + c L^{-1} R_x L^{-H})`` with
    ``K = I + S R_f S^H / var_v = L L^H``.
    """
    R = _check_psd(d.R_x)
    N = R.shape[0]
    R_f = sc.R_f if R_f is None else R_f
    S = np.diag(d.s)
    K = np.eye(N) + (S @ R_f @ S.conj().T) / sc.var_v
    try:
        L = np.linalg.cholesky(hermitian(K))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"interference covariance not PD: {exc}") from exc
    X = sl.solve_triangular(L, R, lower=True)
    A = sl.solve_triangular(L, X.conj().T, lower=True).conj().T
    return logdet2_psd_plus(sc.h2 / sc.var_v * A) / N


def rate1_coherent(sc: Scenario, d: Design) -> float:
    """Rank-one form for ``R_f = var_f * ones``."""
    R = _check_psd(d.R_x)
    N = R.shape[0]
    c = sc.h2 / sc.var_v
    f = sc.var_f / sc.var_v
    s = d.s
    e = d.energy
    q = float(np.vdot(s, solve_hpd(np.eye(N) + c * R, s)).real)
    loss = math.log1p(f * e) - math.log1p(f * q)
    return (logdet2_psd_plus(c * R) - loss / _LOG2) / N


def rate1_incoherent(sc: Scenario, d: Design) -> float:
    """Diagonal form for ``R_f = var_f * I``."""
    R = _check_psd(d.R_x)
    N = R.shape[0]
    c = sc.h2 / sc.var_v
    w = 1.0 / np.sqrt(1.0 + sc.var_f / sc.var_v * np.abs(d.s) ** 2)
    return logdet2_psd_plus(c * (w[:, None] * R * w[None, :])) / N


def rate1(sc: Scenario, d: Design) -> float:
    """Interfered rate; closed forms for the coherent/incoherent models."""
    kind = sc.model
    if kind is InterferenceKind.COHERENT:
        return rate1_coherent(sc, d)
    if kind is InterferenceKind.INCOHERENT:
        return rate1_incoherent(sc, d)
    return rate1_general(sc, d)


def rate_point(sc: Scenario, d: Design) -> RatePoint:
    return RatePoint(rate0(sc, d.R_x), rate1(sc, d))


def compound_rate(sc: Scenario, d: Design, weight=None) -> float:
    """``beta * R1 + (1 - beta) * R0``; ``weight`` overrides ``beta``."""
    b = sc.beta if weight is None else weight
    r0, r1 = rate_point(sc, d)
    return b * r1 + (1.0 - b) * r0


def kl_divergences(sinr_value: float) -> Tuple[float, float]:
    """``(D(f1||f0), D(f0||f1))`` in nats as functions of the SINR."""
    x = float(sinr_value)
    if not x >= 0:
        raise DomainError(f"SINR must be >= 0, got {sinr_value}")
    l = math.log1p(x)
    return x - l, l - x / (1.0 + x)


def papr(s) -> float:
    """Peak-to-average power ratio ``N max|s_n|^2 / ||s||^2``."""
    p = np.abs(np.asarray(s, dtype=complex).ravel()) ** 2
    tot = p.sum()
    if tot == 0:
        raise DomainError("PAPR of the zero vector is undefined")
    return float(p.size * p.max() / tot)


def mutual_information_bounds(cr: float, N: int) -> Tuple[float, float]:
    """Bracket on the per-use input/output mutual information: ``[CR - 1/N, CR]``.

    The true mutual information is not estimated anywhere in this package.
    """
    return cr - 1.0 / N, cr
