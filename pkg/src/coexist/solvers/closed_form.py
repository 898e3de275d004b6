"""
Closed-form optimal designs.

Structure shared by all of them: the radar code sits on the eigenvector of
the smallest codeword eigenvalue (or of the smallest radar-noise
eigenvalue), its energy is the smallest one meeting the SINR target, and
the communication power is spread evenly over the other ``N - 1``
directions.
"""

import math

import numpy as np

from ..errors import InfeasibleError, UnsupportedError
from ..linalg import eigh, unitary_with_last_column
from ..scenario import Design, DesignOutcome, InterferenceKind, Scenario, SolverTag
from .common import Feasibility, make_outcome, require_white, split_eigenvalues
from .gamma import (GammaObjective, argmax_candidates, gamma_bar, gbar_candidates,
                    joint_rho_max)

__all__ = [
    "feasibility_joint",
    "solve_coherent_fixed_codebook",
    "solve_coherent_fixed_waveform",
    "fixed_waveform_gamma",
    "solve_joint",
    "solve_colored_joint",
    "solve_optimal",
]


def _phi(sc: Scenario) -> float:
    return sc.var_w if sc.is_white else sc.noise_min_eigpair[0]


def feasibility_joint(sc: Scenario) -> Feasibility:
    """Whether some design meets the SINR target, and the largest such target.

    Uses the smallest eigenvalue of the radar noise, which equals ``var_w``
    for white noise.
    """
    phi = _phi(sc)
    rho_max = joint_rho_max(sc, phi)
    ok = (sc.rho_min <= rho_max
          and sc.var_a > sc.var_c * sc.rho_min
          and gamma_bar(sc, phi) >= 0)
    return Feasibility(bool(ok), float(rho_max))


def _energy_for(sc: Scenario, gamma_N: float, phi: float) -> float:
    return sc.rho_min * (sc.var_g * gamma_N + phi) / (sc.var_a - sc.var_c * sc.rho_min)


def solve_coherent_fixed_codebook(sc: Scenario, R_x) -> DesignOutcome:
    """Minimum-energy radar code for a given codeword covariance."""
    require_white(sc, "solve_coherent_fixed_codebook")
    lam, U = eigh(R_x)
    N = sc.N
    if float(np.sum(lam)) / N > sc.P_c * (1 + 1e-9) or lam[-1] < -1e-9 * max(1.0, lam[0]):
        raise InfeasibleError("R_x violates the comm power or PSD constraint")
    gN = max(float(lam[-1]), 0.0)
    NPr = sc.total_radar_energy
    rho_max = sc.var_a * NPr / (sc.var_g * gN + sc.var_c * NPr + sc.var_w)
    denom = sc.var_a - sc.var_c * sc.rho_min
    if denom <= 0 or sc.rho_min > rho_max:
        raise InfeasibleError(
            f"rho_min = {sc.rho_min:.6g} exceeds rho_max = {rho_max:.6g} for this codebook",
            rho_max=rho_max)
    eps = _energy_for(sc, gN, sc.var_w)
    s = math.sqrt(eps) * U[:, -1]
    return make_outcome(sc, Design(R_x, s), gN, eps, SolverTag.FIXED_CODEBOOK)


def fixed_waveform_gamma(sc: Scenario, energy: float) -> float:
    """Optimal smallest eigenvalue when the radar code (energy) is fixed.

    Follows the quadratic case table; the interior branch is additionally
    compared with ``0`` when both roots are positive, since the objective
    then decreases on ``[0, lambda_1]`` before rising to ``lambda_2``.
    """
    N, b = sc.N, sc.beta
    h2, v, f2 = sc.h2, sc.var_v, sc.var_f
    E = energy
    ratio = (sc.var_a * E - (sc.var_w + sc.var_c * E) * sc.rho_min)
    g_up = sc.P_c if sc.var_g == 0 else min(sc.P_c, ratio / (sc.var_g * sc.rho_min))

    def G(g):
        c = h2 / v
        return ((N - 1) * math.log1p(c * (N * sc.P_c - g) / (N - 1))
                + (1 - b) * math.log1p(c * g)
                + b * math.log1p(c * g + f2 / v * E))

    A = -N * h2 ** 2
    B = h2 * (N * h2 * sc.P_c - N * v - (N - b) * f2 * E)
    C = h2 * N * sc.P_c * (v + (1 - b) * f2 * E) - b * (N - 1) * v * f2 * E
    disc = B * B - 4 * A * C
    if disc <= 0:
        return 0.0
    sq = math.sqrt(disc)
    lam1, lam2 = sorted(((-B + sq) / (2 * A), (-B - sq) / (2 * A)))
    if lam2 <= 0 or lam1 >= g_up:
        return 0.0
    if 0 < lam2 < g_up:
        if lam1 > 0 and G(0.0) > G(lam2):
            return 0.0
        return lam2
    return 0.0 if G(0.0) >= G(g_up) else g_up


def solve_coherent_fixed_waveform(sc: Scenario, s) -> DesignOutcome:
    """Best codeword covariance against a given radar code (coherent model)."""
    require_white(sc, "solve_coherent_fixed_waveform")
    s = np.asarray(s, dtype=complex).ravel()
    E = float(np.vdot(s, s).real)
    N = sc.N
    if E == 0:
        raise InfeasibleError("a zero radar code cannot meet any SINR target", rho_max=0.0)
    rho_cap = sc.var_a * E / (sc.var_c * E + sc.var_w)
    if E / N > sc.P_r * (1 + 1e-9) or sc.rho_min > rho_cap:
        raise InfeasibleError(
            f"radar code violates power or clutter-limited SINR (rho_max = {rho_cap:.6g})",
            rho_max=rho_cap)
    g = fixed_waveform_gamma(sc, E)
    U = unitary_with_last_column(s)
    R = (U * split_eigenvalues(N, sc.P_c, g)) @ U.conj().T
    return make_outcome(sc, Design(R, s), g, E, SolverTag.FIXED_WAVEFORM)


def _optimal_gamma(obj: GammaObjective) -> float:
    return argmax_candidates(obj, gbar_candidates(obj))


def solve_joint(sc: Scenario) -> DesignOutcome:
    """Jointly optimal design under white radar noise.

    Coherent and incoherent interference share the same optimum; both use
    the identity eigenbasis, i.e. a diagonal ``R_x`` and ``s`` on ``e_N``.
    """
    require_white(sc, "solve_joint")
    if sc.model is InterferenceKind.GENERAL:
        raise UnsupportedError("no closed-form joint design for a general R_f")
    obj = GammaObjective.from_scenario(sc)
    g = _optimal_gamma(obj)
    eps = float(obj.epsilon(g))
    R = np.diag(split_eigenvalues(sc.N, sc.P_c, g)).astype(complex)
    s = np.zeros(sc.N, dtype=complex)
    s[-1] = math.sqrt(eps)
    return make_outcome(sc, Design(R, s), g, eps, SolverTag.JOINT)


def solve_colored_joint(sc: Scenario) -> DesignOutcome:
    """Jointly optimal design for correlated radar noise, coherent model."""
    if sc.model is not InterferenceKind.COHERENT:
        raise UnsupportedError(
            "colored-noise closed form exists only for coherent interference; "
            "incoherent interference needs a numerical method")
    phi, v = sc.noise_min_eigpair
    obj = GammaObjective.from_scenario(sc, phi=phi)
    g = _optimal_gamma(obj)
    eps = float(obj.epsilon(g))
    U = unitary_with_last_column(v)
    R = (U * split_eigenvalues(sc.N, sc.P_c, g)) @ U.conj().T
    s = math.sqrt(eps) * U[:, -1]
    return make_outcome(sc, Design(R, s), g, eps, SolverTag.COLORED)


def solve_optimal(sc: Scenario) -> DesignOutcome:
    """Dispatch to :func:`solve_joint` or :func:`solve_colored_joint`."""
    return solve_joint(sc) if sc.is_white else solve_colored_joint(sc)
