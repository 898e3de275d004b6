"""Joint design of a pulsed radar code and a co-channel communication codebook."""

__version__ = "0.1.0"

from .errors import (ConfigError, ConsistencyError, CoexistError, DomainError,
                     InfeasibleError, NumericalError, UnsupportedError)
from .metrics import (RatePoint, compound_rate, kl_divergences, papr, rate0, rate1,
                      rate_point, sinr)
from .scenario import (Design, DesignOutcome, InterferenceKind, InterferenceModel, Scenario,
                       SolverTag, exp_corr_noise, from_db_spec, swerling1_required_snr,
                       validate)
from .solvers import (baseline_disjoint, baseline_orthogonal, feasibility_joint,
                      solve_coherent_fixed_codebook, solve_coherent_fixed_waveform,
                      solve_colored_joint, solve_joint, solve_optimal, solve_papr_exact,
                      solve_papr_naif)

__all__ = [
    "__version__",
    "CoexistError", "ConfigError", "ConsistencyError", "DomainError", "InfeasibleError",
    "NumericalError", "UnsupportedError",
    "RatePoint", "compound_rate", "kl_divergences", "papr", "rate0", "rate1", "rate_point",
    "sinr",
    "Design", "DesignOutcome", "InterferenceKind", "InterferenceModel", "Scenario",
    "SolverTag", "exp_corr_noise", "from_db_spec", "swerling1_required_snr", "validate",
    "baseline_disjoint", "baseline_orthogonal", "feasibility_joint",
    "solve_coherent_fixed_codebook", "solve_coherent_fixed_waveform", "solve_colored_joint",
    "solve_joint", "solve_optimal", "solve_papr_exact", "solve_papr_naif",
]
