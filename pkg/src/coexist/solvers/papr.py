"""
PAPR-constrained design under incoherent interference.

``solve_papr_naif`` spreads the unconstrained optimum over the vector ``u``
whose peak-to-average ratio is exactly ``delta``.  ``solve_papr_exact``
searches numerically over full (non-diagonal) ``R_x = B B^H`` and complex
``s`` with SLSQP, from the naif design plus seeded random starts.
"""

import hashlib
import math
import struct

import numpy as np
from scipy.optimize import minimize

from ..errors import DomainError, UnsupportedError
from ..linalg import psd_sqrt, unitary_with_last_column
from ..metrics import papr, sinr
from ..scenario import Design, DesignOutcome, InterferenceKind, Scenario, SolverTag
from .common import make_outcome, require_white, split_eigenvalues
from .gamma import GammaObjective, argmax_candidates, gbar_candidates

__all__ = ["papr_vector", "solve_papr_naif", "solve_papr_exact", "scenario_seed"]

MAX_EXACT_N = 4
RESTARTS = 16
_MARGIN = 1e-9


def papr_vector(N: int, delta: float) -> np.ndarray:
    """Unit vector with ``N - 1`` equal entries and a peak of ``delta / N``."""
    if not 1.0 <= delta <= N:
        raise DomainError(f"delta must lie in [1, {N}], got {delta}")
    low = math.sqrt(max(N - delta, 0.0) / (N * (N - 1)))
    u = np.full(N, low, dtype=complex)
    u[-1] = math.sqrt(delta / N)
    return u


def _check_papr_scenario(sc: Scenario, what: str) -> float:
    if sc.model is not InterferenceKind.INCOHERENT:
        raise UnsupportedError(f"{what} applies to incoherent interference only")
    if sc.papr_delta is None:
        raise DomainError(f"{what} needs papr_delta")
    require_white(sc, what)
    return float(sc.papr_delta)


def solve_papr_naif(sc: Scenario) -> DesignOutcome:
    delta = _check_papr_scenario(sc, "solve_papr_naif")
    obj = GammaObjective.from_scenario(sc)
    g = argmax_candidates(obj, gbar_candidates(obj))
    eps = float(obj.epsilon(g))
    u = papr_vector(sc.N, delta)
    U = unitary_with_last_column(u)
    R = (U * split_eigenvalues(sc.N, sc.P_c, g)) @ U.conj().T
    s = math.sqrt(eps) * U[:, -1]
    return make_outcome(sc, Design(R, s), g, eps, SolverTag.PAPR_NAIF)


def scenario_seed(sc: Scenario) -> int:
    vals = (sc.N, sc.var_a, sc.var_c, sc.var_g, sc.var_f, sc.var_v, sc.h2, sc.P_r,
            sc.P_c, sc.rho_min, sc.beta, sc.papr_delta or 0.0)
    digest = hashlib.sha256(struct.pack(f"<{len(vals)}d", *map(float, vals))).digest()
    return int.from_bytes(digest[:8], "little")


class _Problem:
    """Real-vector parametrisation ``x = [Re B, Im B, Re s, Im s]``."""

    def __init__(self, sc: Scenario, delta: float):
        self.sc = sc
        self.N = sc.N
        self.delta = delta
        self.c = sc.h2 / sc.var_v
        self.f = sc.var_f / sc.var_v
        self.log2 = math.log(2.0)

    def unpack(self, x):
        N = self.N
        n2 = N * N
        B = (x[:n2] + 1j * x[n2:2 * n2]).reshape(N, N)
        s = x[2 * n2:2 * n2 + N] + 1j * x[2 * n2 + N:]
        return B @ B.conj().T, s

    def pack(self, R, s):
        B = psd_sqrt(R)
        return np.concatenate([B.real.ravel(), B.imag.ravel(), s.real, s.imag])

    def _split(self, g_B, g_s):
        """Real gradient from conjugate (Wirtinger) derivatives."""
        g_B = 2 * g_B
        g_s = 2 * g_s
        return np.concatenate([g_B.real.ravel(), g_B.imag.ravel(), g_s.real, g_s.imag])

    def neg_ncr(self, x):
        return self.neg_ncr_and_grad(x)[0]

    def neg_ncr_grad(self, x):
        return self.neg_ncr_and_grad(x)[1]

    def neg_ncr_and_grad(self, x):
        N, c, b = self.N, self.c, self.sc.beta
        n2 = N * N
        B = (x[:n2] + 1j * x[n2:2 * n2]).reshape(N, N)
        s = x[2 * n2:2 * n2 + N] + 1j * x[2 * n2 + N:]
        w = 1.0 / np.sqrt(1.0 + self.f * np.abs(s) ** 2)
        I = np.eye(N)
        K0 = I + c * (B @ B.conj().T)
        A = w[:, None] * B
        K1 = I + c * (A @ A.conj().T)
        l0 = np.linalg.slogdet(K0)[1]
        l1 = np.linalg.slogdet(K1)[1]
        val = -((1 - b) * l0 + b * l1) / self.log2

        K1A = np.linalg.solve(K1, A)
        g_B = (1 - b) * c * np.linalg.solve(K0, B) + b * c * w[:, None] * K1A
        # d l1 / d w_n = 2 c Re[(K1^-1 W R)_nn] = 2 c Re[(K1^-1 A B^H)_nn]
        dl1_dw = 2 * c * np.einsum("ij,ij->i", K1A, B.conj()).real
        dw_dp = -0.5 * self.f * w ** 3
        g_s = b * dl1_dw * dw_dp * s  # d/d conj(s) of p_n = |s_n|^2 is s_n
        grad = -self._split(g_B, g_s) / self.log2
        return val, grad

    def constraints(self, x):
        sc = self.sc
        R, s = self.unpack(x)
        N = self.N
        e = float(np.vdot(s, s).real)
        K = sc.var_g * R + sc.var_c * np.outer(s, s.conj()) + sc.noise
        t = float(np.vdot(s, np.linalg.solve(K, s)).real) * sc.var_a
        peak = np.abs(s) ** 2
        return np.concatenate([
            [N * sc.P_c * (1 - _MARGIN) - float(np.trace(R).real),
             N * sc.P_r * (1 - _MARGIN) - e,
             t / (sc.rho_min * (1 + _MARGIN)) - 1.0],
            self.delta * e / N - peak,
        ])

    def constraints_jac(self, x):
        sc = self.sc
        N = self.N
        n2 = N * N
        B = (x[:n2] + 1j * x[n2:2 * n2]).reshape(N, N)
        s = x[2 * n2:2 * n2 + N] + 1j * x[2 * n2 + N:]
        zB = np.zeros((N, N), dtype=complex)
        zs = np.zeros(N, dtype=complex)
        rows = [self._split(-B, zs), self._split(zB, -s)]
        K = sc.var_g * (B @ B.conj().T) + sc.var_c * np.outer(s, s.conj()) + sc.noise
        y = np.linalg.solve(K, s)
        q = float(np.vdot(s, y).real)
        scale = sc.var_a / (sc.rho_min * (1 + _MARGIN))
        g_s = scale * (y - sc.var_c * q * y)
        g_B = -scale * sc.var_g * np.outer(y, y.conj() @ B)
        rows.append(self._split(g_B, g_s))
        for n in range(N):
            g = self.delta / N * s
            g = g.copy()
            g[n] -= s[n]
            rows.append(self._split(zB, g))
        return np.array(rows)


def _project_papr(s: np.ndarray, delta: float) -> np.ndarray:
    """Clip the power profile of ``s`` to ``delta * mean`` keeping energy and phases."""
    p = np.abs(s) ** 2
    e = p.sum()
    cap = delta * e / p.size
    for _ in range(p.size):
        over = p > cap
        if not over.any():
            break
        p[over] = cap
        free = ~over & (p < cap)
        short = e - p.sum()
        if short <= 0 or not free.any():
            break
        p[free] += short * p[free] / p[free].sum() if p[free].sum() > 0 else short / free.sum()
    phase = np.where(np.abs(s) > 0, s / np.where(np.abs(s) > 0, np.abs(s), 1.0), 1.0)
    return np.sqrt(np.minimum(p, cap)) * phase


def _repair(sc: Scenario, d: Design, delta: float) -> Design:
    s = d.s
    if papr(s) > delta:
        s = _project_papr(s, delta)
    d = Design(d.R_x, s)
    v = sinr(sc, d)
    if 0 < v < sc.rho_min:
        d = Design(d.R_x, s * math.sqrt(sc.rho_min / v * (1 + 1e-12)))
        # SINR is not exactly quadratic in the scale because of clutter; one more step
        v = sinr(sc, d)
        if v < sc.rho_min:
            d = Design(d.R_x, d.s * math.sqrt(sc.rho_min / v * (1 + 1e-12)))
    return d


def _verified(sc: Scenario, d: Design, delta: float) -> bool:
    if not d.power_ok(sc) or not np.any(d.s):
        return False
    return (sinr(sc, d) >= sc.rho_min * (1 - 1e-9)
            and papr(d.s) <= delta * (1 + 1e-9))


def _polish(prob: _Problem, x0, max_rounds=10):
    best_x, best_v = x0, prob.neg_ncr(x0)
    cons = {"type": "ineq", "fun": prob.constraints, "jac": prob.constraints_jac}
    for _ in range(max_rounds):
        res = minimize(prob.neg_ncr_and_grad, best_x, jac=True, method="SLSQP",
                       constraints=[cons],
                       options={"maxiter": 400, "ftol": 1e-13})
        if np.min(prob.constraints(res.x)) < -1e-6:
            break
        improvement = best_v - res.fun
        if improvement > 0:
            best_x, best_v = res.x, res.fun
        if improvement < 1e-9:
            break
    return best_x


def solve_papr_exact(sc: Scenario, restarts: int = RESTARTS, seed=None) -> DesignOutcome:
    """Numerically optimal PAPR-constrained design for small ``N``.

    Returns the best verified design among the naif start and ``restarts - 1``
    random starts; every returned design satisfies the SINR, power and PAPR
    constraints.  Raises :class:`UnsupportedError` above ``N = 4``.
    """
    delta = _check_papr_scenario(sc, "solve_papr_exact")
    if sc.N > MAX_EXACT_N:
        raise UnsupportedError(
            f"solve_papr_exact is limited to N <= {MAX_EXACT_N}; use solve_papr_naif")
    naif = solve_papr_naif(sc)
    prob = _Problem(sc, delta)
    rng = np.random.default_rng(scenario_seed(sc) if seed is None else seed)
    N = sc.N

    starts = [prob.pack(naif.design.R_x, naif.design.s)]
    for _ in range(restarts - 1):
        lam = rng.dirichlet(np.ones(N)) * N * sc.P_c * rng.uniform(0.5, 1.0)
        Z = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
        Q, _ = np.linalg.qr(Z)
        R = (Q * lam) @ Q.conj().T
        s = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        s *= math.sqrt(N * sc.P_r * rng.uniform(0.5, 1.0)) / np.linalg.norm(s)
        starts.append(prob.pack(R, s))

    best = naif
    for x0 in starts:
        x = _polish(prob, x0)
        R, s = prob.unpack(x)
        d = _repair(sc, Design(R, s), delta)
        if not _verified(sc, d, delta):
            continue
        out = make_outcome(sc, d, float(np.linalg.eigvalsh(d.R_x)[0]), d.energy,
                           SolverTag.PAPR_EXACT)
        if out.cr > best.cr:
            best = out
    if best is naif:
        best = make_outcome(sc, naif.design, naif.gamma_N_star, naif.epsilon_star,
                            SolverTag.PAPR_EXACT)
    return best
