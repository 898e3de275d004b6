"""
Achievable rate-pair region and its upper boundary.

The region is the set of ``(R0, R1)`` pairs reachable by designs meeting the
SINR and power constraints.  Its interior is explored by random sampling and
its upper boundary by sweeping the weight ``beta`` of the jointly optimal
design (the ``psi`` curve).
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConsistencyError, DomainError, InfeasibleError, UnsupportedError
from .linalg import eigh, random_unitary, unitary_with_last_column
from .metrics import RatePoint, rate0, rate1, sinr
from .scenario import Design, InterferenceKind, Scenario
from .solvers import feasibility_joint, solve_optimal

__all__ = [
    "RegionEstimate",
    "Lemma1Report",
    "psi_curve",
    "sample_region",
    "lemma1_check",
    "pareto_undominated",
    "support_margin",
    "DEFAULT_BETA_GRID",
]

DEFAULT_BETA_GRID = tuple(np.linspace(0.0, 1.0, 101))
_MONO_TOL = 1e-9
_CHUNK = 256


@dataclass
class RegionEstimate:
    """Sampled region plus its ``psi`` boundary.

    Attributes
    ----------
    boundary : list of (beta, RatePoint)
        Upper boundary ordered by increasing ``beta``.  Empty when no
        closed-form optimum exists for the scenario.
    interior_samples : list of RatePoint
        Rate pairs of random feasible designs.
    designs : list of Design
        The designs behind ``interior_samples``, same order.
    meta : dict
        Scenario, seed and sampling statistics.
    """

    boundary: List[Tuple[float, RatePoint]]
    interior_samples: List[RatePoint]
    designs: List[Design] = field(repr=False)
    meta: dict
    warning: Optional[str] = None

    def samples_array(self) -> np.ndarray:
        return np.array(self.interior_samples, dtype=float).reshape(-1, 2)

    def boundary_array(self) -> np.ndarray:
        return np.array([[b, p.r0, p.r1] for b, p in self.boundary], dtype=float).reshape(-1, 3)


def psi_curve(sc: Scenario, beta_grid: Sequence[float] = DEFAULT_BETA_GRID
              ) -> List[Tuple[float, RatePoint]]:
    """Rate pair of the optimal design for each weight in ``beta_grid``.

    Raises
    ------
    InfeasibleError
        If the SINR target cannot be met, before any point is computed.
    ConsistencyError
        If ``R0`` increases or ``R1`` decreases along increasing ``beta``.
    """
    feas = feasibility_joint(sc)
    if not feas.feasible:
        raise InfeasibleError(
            f"rho_min = {sc.rho_min:.6g} exceeds rho_max = {feas.rho_max:.6g}",
            rho_max=feas.rho_max)
    betas = [float(b) for b in beta_grid]
    if any(not 0.0 <= b <= 1.0 for b in betas):
        raise DomainError("beta values must lie in [0, 1]")
    order = np.argsort(betas, kind="stable")
    curve = []
    for i in order:
        out = solve_optimal(sc.replace(beta=betas[i]))
        curve.append((betas[i], RatePoint(out.r0, out.r1)))
    for (_, a), (_, b) in zip(curve, curve[1:]):
        if b.r0 > a.r0 + _MONO_TOL or b.r1 < a.r1 - _MONO_TOL:
            raise ConsistencyError("psi curve is not monotone in beta")
    return curve


def _draw_chunk(sc: Scenario, rng: np.random.Generator, n: int):
    N = sc.N
    NPc = N * sc.P_c
    NPr = sc.total_radar_energy
    for _ in range(n):
        lam = rng.dirichlet(np.ones(N)) * NPc * (1.0 - rng.random())
        U = random_unitary(N, rng)
        R = (U * lam) @ U.conj().T
        z = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        s = z / np.linalg.norm(z) * math.sqrt(NPr * (1.0 - rng.random()))
        yield Design(R, s)


def sample_region(sc: Scenario, n_samples: int, seed: int = 0,
                  beta_grid: Sequence[float] = DEFAULT_BETA_GRID) -> RegionEstimate:
    """Random feasible designs and the ``psi`` boundary.

    Draws are made in chunks of 256, each with its own child of
    ``SeedSequence(seed)``, so the sample set depends only on the seed.
    Sampling stops after ``n_samples`` accepted designs or ``100 * n_samples``
    draws, whichever comes first.
    """
    if int(n_samples) != n_samples or n_samples < 1:
        raise DomainError("n_samples must be a positive integer")
    n_samples = int(n_samples)
    budget = 100 * n_samples
    ss = np.random.SeedSequence(seed)
    points: List[RatePoint] = []
    designs: List[Design] = []
    drawn = 0
    while len(points) < n_samples and drawn < budget:
        rng = np.random.default_rng(ss.spawn(1)[0])
        for d in _draw_chunk(sc, rng, min(_CHUNK, budget - drawn)):
            drawn += 1
            if sinr(sc, d) >= sc.rho_min and d.power_ok(sc, slack=0.0):
                points.append(RatePoint(rate0(sc, d.R_x), rate1(sc, d)))
                designs.append(d)
                if len(points) == n_samples:
                    break

    try:
        boundary = psi_curve(sc, beta_grid)
    except (UnsupportedError, InfeasibleError) as exc:
        boundary = []
        boundary_note = str(exc)
    else:
        boundary_note = None

    warning = None
    if not points:
        warning = f"degenerate region: no feasible sample in {drawn} draws"
        warnings.warn(warning, RuntimeWarning, stacklevel=2)
    meta = {
        "N": sc.N,
        "model": sc.model.value,
        "rho_min": sc.rho_min,
        "seed": seed,
        "drawn": drawn,
        "accepted": len(points),
        "boundary_note": boundary_note,
    }
    return RegionEstimate(boundary, points, designs, meta, warning)


def pareto_undominated(point: RatePoint, samples: np.ndarray, tol: float = 1e-9) -> bool:
    """True when no sample beats ``point`` in both coordinates by more than ``tol``."""
    samples = np.asarray(samples, dtype=float).reshape(-1, 2)
    better = (samples[:, 0] > point[0] + tol) & (samples[:, 1] > point[1] + tol)
    return not bool(np.any(better))


def support_margin(boundary: Sequence[Tuple[float, RatePoint]], samples: np.ndarray) -> float:
    """Smallest ``psi`` objective minus best sample objective over the boundary weights.

    A non-negative value means every sample lies below the supporting lines
    through the boundary points.
    """
    samples = np.asarray(samples, dtype=float).reshape(-1, 2)
    if not len(samples):
        return math.inf
    worst = math.inf
    for b, p in boundary:
        top = np.max(b * samples[:, 1] + (1 - b) * samples[:, 0])
        worst = min(worst, b * p.r1 + (1 - b) * p.r0 - top)
    return float(worst)


@dataclass
class Lemma1Report:
    """Outcome of the white-versus-colored dominance check.

    ``margins`` holds ``R1'' - R1'`` per probe.  ``rebase_gaps`` holds
    ``R1'' - R1_hat``, the rate change caused by moving the radar code from
    the codebook's weakest direction to the noise's weakest direction.  It
    is zero for coherent interference.
    """

    n_probes: int
    margins: np.ndarray
    rebase_gaps: np.ndarray
    r0_errors: np.ndarray
    sinr_slack: np.ndarray
    violations: List[dict]

    @property
    def min_margin(self) -> float:
        return float(np.min(self.margins)) if self.margins.size else math.inf

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.violations)} violations"
        return (f"lemma1: {self.n_probes} probes, min margin {self.min_margin:.3e}, "
                f"max |R0 error| {float(np.max(self.r0_errors, initial=0.0)):.1e}, {status}")


def _serialize(d: Design) -> dict:
    return {
        "R_x": [[complex(v) for v in row] for row in d.R_x],
        "s": [complex(v) for v in d.s],
    }


def lemma1_check(sc_white: Scenario, sc_colored: Scenario, n_probes: int,
                 seed: int = 0, tol: float = 1e-9) -> Lemma1Report:
    """Check that colored radar noise never shrinks the coherent rate region.

    For every probe design ``(R', s')`` feasible under white noise, the
    design ``R'' = U diag(eig R') U^H``, ``s'' = sqrt(||s'||^2) v_N`` (``U``
    unitary with last column ``v_N``, the weakest noise eigenvector) must be
    feasible under the colored noise, keep ``R0`` and not lose ``R1``.
    """
    for name, sc in (("sc_white", sc_white), ("sc_colored", sc_colored)):
        if sc.model is not InterferenceKind.COHERENT:
            raise DomainError(f"{name}: the dominance check needs coherent interference")
    if not sc_white.is_white:
        raise DomainError("sc_white: radar noise must be white")
    if sc_white.N != sc_colored.N or abs(sc_white.var_w - sc_colored.var_w) > 1e-12 * sc_white.var_w:
        raise DomainError("scenarios must share N and the noise diagonal var_w")

    est = sample_region(sc_white, n_probes, seed=seed, beta_grid=())
    _, v = sc_colored.noise_min_eigpair
    U = unitary_with_last_column(v)

    margins, gaps, r0_err, slack, bad = [], [], [], [], []
    for d in est.designs:
        lam, W = eigh(d.R_x)
        r0p = rate0(sc_white, d.R_x)
        r1p = rate1(sc_white, d)
        eps = d.energy
        hat = Design(d.R_x, math.sqrt(eps) * W[:, -1])
        dd = Design((U * lam) @ U.conj().T, math.sqrt(eps) * U[:, -1])
        r0pp = rate0(sc_colored, dd.R_x)
        r1pp = rate1(sc_colored, dd)
        q = sinr(sc_colored, dd)
        margins.append(r1pp - r1p)
        gaps.append(r1pp - rate1(sc_white, hat))
        r0_err.append(abs(r0pp - r0p))
        slack.append(q / sc_colored.rho_min - 1.0)
        if (r1pp < r1p - tol or abs(r0pp - r0p) > tol
                or q < sc_colored.rho_min * (1 - tol) or not dd.power_ok(sc_colored)):
            bad.append({"probe": _serialize(d), "constructed": _serialize(dd),
                        "R0'": r0p, "R1'": r1p, "R0''": r0pp, "R1''": r1pp, "sinr''": q})
    return Lemma1Report(len(est.designs), np.array(margins), np.array(gaps),
                        np.array(r0_err), np.array(slack), bad)
