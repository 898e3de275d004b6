"""Exception hierarchy shared by every module of the package."""


class CoexistError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CoexistError, ValueError):
    """An input lies outside the domain of the requested operation."""


class NumericalError(CoexistError, ArithmeticError):
    """A numerical routine failed (non-convergence, singular matrix, ...)."""


class InfeasibleError(CoexistError):
    """The radar SINR / power constraints cannot be met.

    Parameters
    ----------
    message : str
        Human readable explanation.
    rho_max : float
        Largest SINR requirement the scenario could support (linear units).
    """

    def __init__(self, message, rho_max=float("nan")):
        super().__init__(message)
        self.rho_max = float(rho_max)


class UnsupportedError(CoexistError):
    """The requested solver does not handle this scenario/size combination."""


class ConsistencyError(CoexistError):
    """Two independent computations of the same quantity disagree."""


class ConfigError(CoexistError):
    """A configuration file could not be parsed or validated."""
