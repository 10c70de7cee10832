"""Exception hierarchy shared by all numerical modules.

Two broad failure families matter to callers: inputs outside the validity
domain of a formula (DomainError and subclasses) and computations that ran
but could not reach the requested accuracy (AccuracyError and subclasses).
The CLI maps these to exit codes 1 and 2 respectively.
"""


class WedgeHybridError(Exception):
    """Base class for all package errors."""


class DomainError(WedgeHybridError, ValueError):
    """Input outside the mathematical domain of the operation."""


class RangeError(DomainError):
    """Input inside the math domain but outside the accuracy window

    of the series engine (|z| beyond the trusted radius, energies above
    the eigenvalue window, and so on).
    """


class PoleError(DomainError):
    """Evaluation requested at (or numerically on top of) a pole.

    ``nearest`` carries the pole location when it is known.
    """

    def __init__(self, message: str, nearest: float | None = None):
        super().__init__(message)
        self.nearest = nearest


class AccuracyError(WedgeHybridError, ArithmeticError):
    """The computation ran but the requested accuracy was not certified."""

    def __init__(self, message: str, estimate: float | None = None):
        super().__init__(message)
        self.estimate = estimate


class ConvergenceError(AccuracyError):
    """An iteration (series, fixed point, Newton) failed to converge."""
