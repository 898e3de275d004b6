from typing import NamedTuple

import numpy as np

from ..errors import UnsupportedError
from ..metrics import rate0, rate1, sinr
from ..scenario import Design, DesignOutcome, Scenario, SolverTag


class Feasibility(NamedTuple):
    feasible: bool
    rho_max: float


def make_outcome(sc: Scenario, design: Design, gamma_N: float, epsilon: float,
                 tag: SolverTag, feasible: bool = True) -> DesignOutcome:
    r0 = rate0(sc, design.R_x)
    r1 = rate1(sc, design)
    return DesignOutcome(
        design=design,
        gamma_N_star=float(gamma_N),
        epsilon_star=float(epsilon),
        r0=r0,
        r1=r1,
        cr=sc.beta * r1 + (1.0 - sc.beta) * r0,
        sinr=sinr(sc, design),
        feasible=bool(feasible),
        solver_tag=tag,
    )


def split_eigenvalues(N: int, P_c: float, gamma_N: float) -> np.ndarray:
    """``(N P_c - g)/(N - 1)`` repeated ``N - 1`` times, then ``g``."""
    rest = (N * P_c - gamma_N) / (N - 1)
    return np.array([rest] * (N - 1) + [gamma_N], dtype=float)


def require_white(sc: Scenario, what: str) -> None:
    if not sc.is_white:
        raise UnsupportedError(f"{what} assumes white radar noise; "
                               "use solve_colored_joint for correlated noise")
