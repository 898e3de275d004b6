"""
Reference designs that ignore (disjoint) or sidestep (orthogonal) the
co-design problem.  Infeasibility is reported through ``feasible=False``
rather than an exception; the returned design then uses the full radar
energy budget.
"""

import math

import numpy as np

from ..scenario import Design, DesignOutcome, Scenario, SolverTag
from .common import make_outcome, require_white

__all__ = ["baseline_disjoint", "baseline_orthogonal"]


def _pulse_train(N: int) -> np.ndarray:
    return np.full(N, 1.0 / math.sqrt(N), dtype=complex)


def _min_energy(sc: Scenario, interference: float):
    """Smallest ``||s||^2`` with ``var_a e / (interference + var_c e) >= rho_min``."""
    denom = sc.var_a - sc.var_c * sc.rho_min
    if denom <= 0:
        return sc.total_radar_energy, False
    e = sc.rho_min * interference / denom
    if e > sc.total_radar_energy * (1 + 1e-12):
        return sc.total_radar_energy, False
    return min(e, sc.total_radar_energy), True


def baseline_disjoint(sc: Scenario) -> DesignOutcome:
    """White codebook ``P_c I`` and a minimum-energy unmodulated pulse train."""
    require_white(sc, "baseline_disjoint")
    N = sc.N
    R = sc.P_c * np.eye(N, dtype=complex)
    eps, ok = _min_energy(sc, sc.var_g * sc.P_c + sc.var_w)
    s = math.sqrt(eps) * _pulse_train(N)
    return make_outcome(sc, Design(R, s), sc.P_c, eps, SolverTag.DISJOINT, ok)


def baseline_orthogonal(sc: Scenario) -> DesignOutcome:
    """Radar and comm in orthogonal subspaces.

    The radar keeps the unmodulated pulse train direction ``u``; the comm
    system spreads its full budget over the ``N - 1`` directions orthogonal
    to ``u``.  Coherent returns then stay inside ``span(u)``, while
    incoherent ones leak into every direction.
    """
    require_white(sc, "baseline_orthogonal")
    N = sc.N
    u = _pulse_train(N)
    R = N * sc.P_c / (N - 1) * (np.eye(N) - np.outer(u, u.conj()))
    eps, ok = _min_energy(sc, sc.var_w)
    s = math.sqrt(eps) * u
    return make_outcome(sc, Design(R, s), 0.0, eps, SolverTag.ORTHOGONAL, ok)
