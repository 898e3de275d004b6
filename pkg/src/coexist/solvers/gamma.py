"""
One-dimensional reduction of the joint design.

Once the radar energy is tied to the smallest codeword eigenvalue ``g``
through the active SINR constraint,

    eps(g) = k * (var_g * g + phi),   k = rho_min / (var_a - var_c * rho_min),

and the remaining ``N - 1`` eigenvalues share ``N * P_c - g`` evenly, the
compound rate times ``N`` becomes

    Gbar(g) = (N-1) log(1 + c (N P_c - g) / (N-1)) + (1-beta) log(1 + c g)
              - beta log(1 + f eps(g)) + beta log(1 + c g + f eps(g))

with ``c = h2 / var_v`` and ``f = var_f / var_v``.  Every term is
``w * log(p + q g)``, so ``dGbar/dg = sum_i w_i q_i / (p_i + q_i g)``;
clearing the four (positive) denominators leaves a cubic whose roots are
the interior stationary points.
"""

from dataclasses import dataclass
from typing import List, NamedTuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from ..errors import ConsistencyError, InfeasibleError
from ..scenario import Scenario

__all__ = [
    "GammaObjective",
    "CandidateSet",
    "gamma_bar",
    "joint_rho_max",
    "cubic_coefficients",
    "cubic_roots",
    "numeric_stationary_points",
    "gbar_candidates",
    "argmax_candidates",
]

_LOG2 = np.log(2.0)
GRID_POINTS = 10_000
ROOT_ATOL = 1e-7


def joint_rho_max(sc: Scenario, phi: float) -> float:
    NPr = sc.total_radar_energy
    return sc.var_a * NPr / (sc.var_c * NPr + phi)


def gamma_bar(sc: Scenario, phi: float) -> float:
    """Largest admissible smallest eigenvalue; negative means infeasible."""
    NPr = sc.total_radar_energy
    slack = sc.var_a * NPr - (phi + sc.var_c * NPr) * sc.rho_min
    if sc.var_g == 0:
        return sc.P_c if slack >= 0 else -np.inf
    return min(sc.P_c, slack / (sc.var_g * sc.rho_min))


@dataclass(frozen=True)
class GammaObjective:
    """``Gbar`` with every scenario parameter captured by value (log2 units)."""

    N: int
    P_c: float
    beta: float
    c: float
    f: float
    k: float
    var_g: float
    phi: float
    upper: float
    colored: bool = False

    @classmethod
    def from_scenario(cls, sc: Scenario, phi=None) -> "GammaObjective":
        colored = phi is not None
        phi = sc.var_w if phi is None else float(phi)
        denom = sc.var_a - sc.var_c * sc.rho_min
        rho_max = joint_rho_max(sc, phi)
        if denom <= 0:
            raise InfeasibleError(
                "var_a <= var_c * rho_min: clutter alone violates the SINR target",
                rho_max=min(rho_max, sc.var_a / sc.var_c if sc.var_c else np.inf))
        gb = gamma_bar(sc, phi)
        if not sc.rho_min <= rho_max or gb < 0:
            raise InfeasibleError(
                f"rho_min = {sc.rho_min:.6g} exceeds rho_max = {rho_max:.6g}",
                rho_max=rho_max)
        return cls(N=sc.N, P_c=sc.P_c, beta=sc.beta, c=sc.h2 / sc.var_v,
                   f=sc.var_f / sc.var_v, k=sc.rho_min / denom, var_g=sc.var_g,
                   phi=phi, upper=float(gb), colored=colored)

    def epsilon(self, g):
        return self.k * (self.var_g * np.asarray(g, dtype=float) + self.phi)

    def linear_terms(self):
        """``(w_i, p_i, q_i)`` such that ``Gbar = sum w_i ln(p_i + q_i g) / ln 2``."""
        N, c, f, k = self.N, self.c, self.f, self.k
        b = self.beta
        base = 1.0 + f * k * self.phi
        slope = f * k * self.var_g
        return [
            (N - 1.0, 1.0 + c * N * self.P_c / (N - 1.0), -c / (N - 1.0)),
            (1.0 - b, 1.0, c),
            (-b, base, slope),
            (b, base, c + slope),
        ]

    def __call__(self, g):
        g = np.asarray(g, dtype=float)
        out = np.zeros_like(g)
        for w, p, q in self.linear_terms():
            if w:
                out = out + w * np.log(p + q * g)
        return out / _LOG2

    def derivative(self, g):
        g = np.asarray(g, dtype=float)
        out = np.zeros_like(g)
        for w, p, q in self.linear_terms():
            if w and q:
                out = out + w * q / (p + q * g)
        return out / _LOG2

    def cr(self, g) -> float:
        return float(self(g)) / self.N


class CandidateSet(NamedTuple):
    points: List[float]


def cubic_coefficients(obj: GammaObjective) -> np.ndarray:
    """``[A, B, C, D]`` (highest degree first) of the stationarity cubic.

    Built as ``sum_i w_i q_i prod_{j != i} (p_j + q_j g)``, i.e. the
    numerator of ``dGbar/dg`` over the common denominator.
    """
    terms = obj.linear_terms()
    total = np.zeros(4)
    for i, (w, _, q) in enumerate(terms):
        poly = np.array([w * q])
        for j, (_, pj, qj) in enumerate(terms):
            if j != i:
                poly = P.polymul(poly, [pj, qj])
        total[: len(poly)] += poly
    return total[::-1]


def cubic_roots(obj: GammaObjective) -> List[float]:
    """Real roots of the stationarity cubic lying in ``[0, upper]``."""
    coef = cubic_coefficients(obj)[::-1]
    scale = np.max(np.abs(coef))
    if scale == 0:
        return []
    coef = coef / scale
    while coef.size > 1 and abs(coef[-1]) < 1e-14:
        coef = coef[:-1]
    if coef.size < 2:
        return []
    roots = P.polyroots(coef)
    hi = obj.upper
    tol = 1e-9 * max(1.0, hi)
    out = []
    for r in roots:
        if abs(r.imag) <= 1e-7 * max(1.0, abs(r)) and -tol <= r.real <= hi + tol:
            x = _polish(coef, float(min(max(r.real, 0.0), hi)))
            out.append(min(max(x, 0.0), hi))
    return sorted(out)


def _polish(coef, x, steps=3):
    d = P.polyder(coef)
    for _ in range(steps):
        dv = P.polyval(x, d)
        if dv == 0:
            break
        x_new = x - P.polyval(x, coef) / dv
        if not np.isfinite(x_new) or abs(x_new - x) > 1e-6 * max(1.0, abs(x)):
            break
        x = x_new
    return x


def numeric_stationary_points(obj: GammaObjective, n=GRID_POINTS) -> List[float]:
    """Sign changes of a central-difference derivative, refined by bisection."""
    hi = obj.upper
    if hi <= 0:
        return []
    h = 1e-5 * max(1.0, hi)

    def dnum(x):
        return (obj(x + h) - obj(x - h)) / (2 * h)

    grid = np.linspace(0.0, hi, n)
    vals = dnum(grid)
    roots = []
    for i in range(n - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0:
            roots.append(float(grid[i]))
        elif a * b < 0:
            roots.append(brentq(lambda x: float(dnum(x)), grid[i], grid[i + 1],
                                xtol=1e-13, rtol=1e-13))
    if vals[-1] == 0:
        roots.append(float(hi))
    return roots


def gbar_candidates(obj: GammaObjective) -> CandidateSet:
    """``{0, upper}`` plus every stationary point of ``Gbar`` in between.

    Roots of the cubic are cross-checked against the numeric derivative;
    a mismatch larger than ``1e-7 * max(1, upper)`` raises
    :class:`ConsistencyError`.  A cubic root without a numeric sign change
    is accepted only if the derivative keeps its sign across it (a tangency).
    """
    hi = obj.upper
    tol = ROOT_ATOL * max(1.0, hi)
    sym = cubic_roots(obj)
    num = numeric_stationary_points(obj)
    for r in num:
        if not any(abs(r - x) <= tol for x in sym):
            raise ConsistencyError(
                f"numeric stationary point {r:.12g} has no cubic counterpart {sym}")
    for x in sym:
        if 0 < x < hi and not any(abs(r - x) <= tol for r in num):
            dx = 1e-4 * max(1.0, hi)
            left, right = obj.derivative(max(x - dx, 0.0)), obj.derivative(min(x + dx, hi))
            if left * right < 0:
                raise ConsistencyError(
                    f"cubic root {x:.12g} is a crossing the numeric scan missed")
    pts = sorted(set([0.0, float(hi)] + [float(x) for x in sym]))
    return CandidateSet(pts)


def argmax_candidates(obj: GammaObjective, cands: CandidateSet) -> float:
    """Best candidate; among (numerically) tied values the smallest ``g`` wins."""
    pts = sorted(cands.points)
    vals = [float(obj(g)) for g in pts]
    best = max(vals)
    tol = 1e-13 * max(1.0, abs(best))
    for g, v in zip(pts, vals):
        if v >= best - tol:
            return g
    return pts[-1]
