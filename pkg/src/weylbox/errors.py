"""Exception hierarchy shared by every weylbox module."""


class WeylboxError(Exception):
    """Base class for all errors raised by weylbox."""


class DomainError(WeylboxError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class DivergenceError(DomainError):
    """The requested series or integral diverges at the given arguments."""


class SingularityError(DomainError):
    """A closed form has a vanishing denominator at the given arguments."""


class ArityError(WeylboxError, ValueError):
    """A list of per-dimension values is missing entries."""


class CountOverflowError(WeylboxError, OverflowError):
    """A lattice count would not fit in a signed 64-bit integer."""


class ConvergenceError(WeylboxError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance.

    Attributes
    ----------
    estimate : float
        Best estimate of the integral when the subdivision budget ran out.
    error : float
        Estimated absolute error of ``estimate``.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
