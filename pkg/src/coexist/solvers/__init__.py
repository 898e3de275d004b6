"""Optimal and baseline designs."""

from .baselines import baseline_disjoint, baseline_orthogonal
from .closed_form import (feasibility_joint, fixed_waveform_gamma,
                          solve_coherent_fixed_codebook, solve_coherent_fixed_waveform,
                          solve_colored_joint, solve_joint, solve_optimal)
from .common import Feasibility, make_outcome
from .gamma import (CandidateSet, GammaObjective, argmax_candidates, cubic_coefficients,
                    cubic_roots, gamma_bar, gbar_candidates, numeric_stationary_points)
from .papr import papr_vector, solve_papr_exact, solve_papr_naif

SOLVERS = {
    "joint": solve_joint,
    "colored": solve_colored_joint,
    "optimal": solve_optimal,
    "papr_naif": solve_papr_naif,
    "papr_exact": solve_papr_exact,
    "disjoint": baseline_disjoint,
    "orthogonal": baseline_orthogonal,
}

__all__ = [
    "SOLVERS",
    "Feasibility",
    "CandidateSet",
    "GammaObjective",
    "argmax_candidates",
    "baseline_disjoint",
    "baseline_orthogonal",
    "cubic_coefficients",
    "cubic_roots",
    "feasibility_joint",
    "fixed_waveform_gamma",
    "gamma_bar",
    "gbar_candidates",
    "make_outcome",
    "numeric_stationary_points",
    "papr_vector",
    "solve_coherent_fixed_codebook",
    "solve_coherent_fixed_waveform",
    "solve_colored_joint",
    "solve_joint",
    "solve_optimal",
    "solve_papr_exact",
    "solve_papr_naif",
]
