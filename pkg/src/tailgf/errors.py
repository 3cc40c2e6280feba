"""Exception hierarchy for tailgf.

Every error raised on a supported code path derives from :class:`TailgfError`,
so callers (and the CLI) can distinguish usage errors from numerical failures.
"""


class TailgfError(Exception):
    """Base class for all tailgf errors."""


class ConstraintError(TailgfError, ValueError):
    """A law or parameter set violates a named validity constraint."""


class DomainError(TailgfError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NotExtendableError(TailgfError):
    """The offspring law has no second fixed point within its radius."""


class RegimeError(TailgfError):
    """Operation is not defined for the law's criticality regime."""


class DivergenceError(TailgfError, ArithmeticError):
    """A quantity required to be finite is infinite or undefined."""


class NumericalError(TailgfError, ArithmeticError):
    """Base class for numerical-method failures (exit code 3 in the CLI)."""


class QuadratureError(NumericalError):
    """Adaptive quadrature could not meet the requested tolerance.

    Carries the best value and the achieved error estimate.
    """

    def __init__(self, message, value=None, err_estimate=None):
        super().__init__(message)
        self.value = value
        self.err_estimate = err_estimate


class BracketError(NumericalError):
    """A root bracket could not be established or the solve failed."""


class ExtractionError(NumericalError):
    """Series-coefficient extraction failed its node-doubling certificate."""


class InsufficientEventsError(NumericalError):
    """A Monte Carlo estimator received too few conditioning events."""
