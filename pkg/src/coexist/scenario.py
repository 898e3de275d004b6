"""
Scenario parameters, designs and solver outcomes.

All quantities are linear (power units); the dB front-end lives in
:func:`from_db_spec`.  The normalisation used throughout the experiments is
``var_v = var_w = var_a = h2 = var_g = 1``.
"""

import enum
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import DomainError
from .linalg import hermitian, is_hermitian, min_eigpair

__all__ = [
    "InterferenceKind",
    "InterferenceModel",
    "Scenario",
    "Design",
    "DesignOutcome",
    "SolverTag",
    "from_db_spec",
    "swerling1_required_snr",
    "exp_corr_noise",
    "validate",
    "db2lin",
    "lin2db",
    "DEFAULT_PD",
    "DEFAULT_PFA",
]

DEFAULT_PD = 0.9
DEFAULT_PFA = 1e-4


def db2lin(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def lin2db(x: float) -> float:
    return 10.0 * math.log10(x)


class InterferenceKind(str, enum.Enum):
    COHERENT = "coherent"
    INCOHERENT = "incoherent"
    GENERAL = "general"


@dataclass(frozen=True, eq=False)
class InterferenceModel:
    """Covariance model of the radar returns hitting the comm receiver.

    ``coherent`` expands to ``var_f * ones(N, N)`` (rank one), ``incoherent``
    to ``var_f * I``; ``general`` carries its own matrix ``R_f``.
    """

    kind: InterferenceKind
    R_f: Optional[np.ndarray] = None

    @classmethod
    def parse(cls, value) -> "InterferenceModel":
        if isinstance(value, InterferenceModel):
            return value
        try:
            kind = InterferenceKind(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown interference model {value!r}") from None
        if kind is InterferenceKind.GENERAL:
            raise DomainError("general interference needs an explicit R_f matrix")
        return cls(kind)

    @classmethod
    def general(cls, R_f) -> "InterferenceModel":
        return cls(InterferenceKind.GENERAL, hermitian(R_f))

    def covariance(self, N: int, var_f: float) -> np.ndarray:
        if self.kind is InterferenceKind.COHERENT:
            return var_f * np.ones((N, N), dtype=complex)
        if self.kind is InterferenceKind.INCOHERENT:
            return var_f * np.eye(N, dtype=complex)
        return np.array(self.R_f, dtype=complex)


@dataclass(frozen=True, eq=False)
class Scenario:
    N: int
    var_a: float
    var_c: float
    var_g: float
    var_f: float
    var_v: float
    h2: float
    P_r: float
    P_c: float
    rho_min: float
    beta: float
    alpha: float
    noise: np.ndarray
    interference: InterferenceModel = field(
        default_factory=lambda: InterferenceModel(InterferenceKind.COHERENT))
    papr_delta: Optional[float] = None

    @property
    def var_w(self) -> float:
        return float(np.real(self.noise[0, 0]))

    @property
    def model(self) -> InterferenceKind:
        return self.interference.kind

    @cached_property
    def R_f(self) -> np.ndarray:
        return self.interference.covariance(self.N, self.var_f)

    @cached_property
    def noise_min_eigpair(self):
        """``(phi_N, v_N)``: smallest eigenvalue of the radar noise and its eigenvector."""
        return min_eigpair(self.noise)

    @property
    def is_white(self) -> bool:
        off = self.noise - np.diag(np.diag(self.noise))
        return bool(np.all(np.abs(off) <= 1e-12 * max(1.0, self.var_w)))

    @property
    def total_radar_energy(self) -> float:
        """``N * P_r``, the largest admissible ``||s||^2``."""
        return self.N * self.P_r

    def replace(self, **changes) -> "Scenario":
        return replace(self, **changes)

    def with_white_noise(self) -> "Scenario":
        return replace(self, noise=self.var_w * np.eye(self.N, dtype=complex))

    def with_model(self, model) -> "Scenario":
        return replace(self, interference=InterferenceModel.parse(model))


class SolverTag(str, enum.Enum):
    FIXED_CODEBOOK = "fixed_codebook"
    FIXED_WAVEFORM = "fixed_waveform"
    JOINT = "joint"
    COLORED = "colored"
    PAPR_NAIF = "papr_naif"
    PAPR_EXACT = "papr_exact"
    DISJOINT = "disjoint"
    ORTHOGONAL = "orthogonal"


@dataclass(frozen=True, eq=False)
class Design:
    """Codeword covariance ``R_x`` and radar slow-time code ``s``."""

    R_x: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "R_x", hermitian(self.R_x))
        object.__setattr__(self, "s", np.asarray(self.s, dtype=complex).ravel())

    @property
    def energy(self) -> float:
        return float(np.vdot(self.s, self.s).real)

    def power_ok(self, sc: Scenario, slack=1e-9) -> bool:
        N = self.s.size
        comm = float(np.trace(self.R_x).real) / N <= sc.P_c * (1 + slack)
        radar = self.energy / N <= sc.P_r * (1 + slack)
        psd = np.linalg.eigvalsh(self.R_x)[0] >= -1e-9 * max(1.0, sc.P_c)
        return bool(comm and radar and psd)


@dataclass(frozen=True, eq=False)
class DesignOutcome:
    design: Design
    gamma_N_star: float
    epsilon_star: float
    r0: float
    r1: float
    cr: float
    sinr: float
    feasible: bool
    solver_tag: SolverTag

    def summary(self) -> dict:
        return {
            "solver": self.solver_tag.value,
            "feasible": self.feasible,
            "gamma_N": self.gamma_N_star,
            "epsilon": self.epsilon_star,
            "R0": self.r0,
            "R1": self.r1,
            "CR": self.cr,
            "SINR": self.sinr,
        }


def swerling1_required_snr(pd: float, pfa: float) -> float:
    """Cumulated SNR making ``pd = pfa ** (1 / (1 + snr))`` hold (linear)."""
    if not (0.0 < pfa < 1.0 and 0.0 < pd < 1.0):
        raise DomainError("pd and pfa must lie in (0, 1)")
    if pd <= pfa:
        raise DomainError(f"pd ({pd}) must exceed pfa ({pfa})")
    return math.log(pfa) / math.log(pd) - 1.0


def exp_corr_noise(N: int, r: float, var_w: float = 1.0) -> np.ndarray:
    """Exponentially correlated noise, ``M_ij = var_w * r**|i - j|``."""
    idx = np.arange(N)
    return var_w * np.power(float(r), np.abs(idx[:, None] - idx[None, :])).astype(complex)


def from_db_spec(snr_comm_db, inr_db, scr_db, rho_min_db, cum_radar_snr_db=None,
                 N=8, beta=0.5, alpha=None, model="coherent", noise=None,
                 papr_delta=None) -> Scenario:
    """Build a :class:`Scenario` from dB-domain figures.

    The scale is fixed by ``var_v = var_w = var_a = h2 = var_g = 1``.  When
    ``cum_radar_snr_db`` is ``None`` the cumulated radar SNR is the exact
    Swerling-I requirement for ``pd = 0.9``, ``pfa = 1e-4`` (86.42, linear).
    ``alpha`` defaults to ``beta``.
    """
    vals = dict(snr_comm_db=snr_comm_db, inr_db=inr_db, scr_db=scr_db,
                rho_min_db=rho_min_db)
    if cum_radar_snr_db is not None:
        vals["cum_radar_snr_db"] = cum_radar_snr_db
    for name, v in vals.items():
        if not math.isfinite(float(v)):
            raise DomainError(f"{name} must be finite, got {v}")
    if int(N) != N or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N}")
    N = int(N)
    var_v = var_w = var_a = h2 = var_g = 1.0
    if cum_radar_snr_db is None:
        cum = swerling1_required_snr(DEFAULT_PD, DEFAULT_PFA)
    else:
        cum = db2lin(cum_radar_snr_db)
    M = var_w * np.eye(N, dtype=complex) if noise is None else hermitian(noise)
    sc = Scenario(
        N=N,
        var_a=var_a,
        var_c=var_a / db2lin(scr_db),
        var_g=var_g,
        var_f=db2lin(inr_db) * var_v,
        var_v=var_v,
        h2=h2,
        P_r=var_w * cum / var_a / N,
        P_c=db2lin(snr_comm_db) * var_v / h2,
        rho_min=db2lin(rho_min_db),
        beta=float(beta),
        alpha=float(beta if alpha is None else alpha),
        noise=M,
        interference=InterferenceModel.parse(model),
        papr_delta=None if papr_delta is None else float(papr_delta),
    )
    validate(sc)
    return sc


def validate(sc: Scenario) -> None:
    """Raise :class:`DomainError` listing every violated scenario invariant."""
    errs = []
    if int(sc.N) != sc.N or sc.N < 2:
        errs.append(f"N: must be an integer >= 2 (got {sc.N})")
    for name in ("var_a", "var_c", "var_g", "var_f", "var_v"):
        v = getattr(sc, name)
        if not (math.isfinite(v) and v >= 0):
            errs.append(f"{name}: must be finite and >= 0 (got {v})")
    for name in ("h2", "P_r", "P_c", "rho_min"):
        v = getattr(sc, name)
        if not (math.isfinite(v) and v > 0):
            errs.append(f"{name}: must be finite and > 0 (got {v})")
    if sc.var_v <= 0:
        errs.append("var_v: comm noise power must be > 0")
    for name in ("beta", "alpha"):
        v = getattr(sc, name)
        if not 0.0 <= v <= 1.0:
            errs.append(f"{name}: must lie in [0, 1] (got {v})")

    M = np.asarray(sc.noise)
    if M.shape != (sc.N, sc.N):
        errs.append(f"noise: expected shape {(sc.N, sc.N)}, got {M.shape}")
    elif not is_hermitian(M, atol=1e-12 * max(1.0, np.abs(M).max())):
        errs.append("noise: matrix is not Hermitian")
    else:
        d = np.real(np.diag(M))
        if d[0] <= 0 or np.max(np.abs(d - d[0])) > 1e-9 * abs(d[0]):
            errs.append("noise: diagonal must be a constant positive value var_w")
        elif np.linalg.eigvalsh(M)[0] <= 0:
            errs.append("noise: covariance must be positive definite")

    im = sc.interference
    if im.kind is InterferenceKind.GENERAL:
        R = im.R_f
        if R is None or np.shape(R) != (sc.N, sc.N):
            errs.append("interference: R_f must be an N x N matrix")
        else:
            if np.linalg.eigvalsh(hermitian(R))[0] < -1e-10 * max(1.0, sc.var_f):
                errs.append("interference: R_f must be PSD")
            d = np.real(np.diag(R))
            if np.max(np.abs(d - sc.var_f)) > 1e-9 * max(1.0, sc.var_f):
                errs.append("interference: R_f diagonal must equal var_f")

    if sc.papr_delta is not None and not 1.0 <= sc.papr_delta <= sc.N:
        errs.append(f"papr_delta: must lie in [1, N={sc.N}] (got {sc.papr_delta})")
    if errs:
        raise DomainError("invalid scenario: " + "; ".join(errs))
