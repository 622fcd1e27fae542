"""Exception hierarchy shared by the generators, quadrature and CLI."""

from adomian.expr import EvaluationError, ExprError, ParseError
from adomian.series import SeriesError, SingularSeriesError


class AdomianError(ValueError):
    """Base class for generator errors."""


class UnsupportedError(AdomianError):
    """The requested backend cannot handle this nonlinearity."""


class OrderError(AdomianError):
    """Input sequences or component sets are too short for the requested order."""


class SingularDenominatorError(AdomianError, ZeroDivisionError):
    """Order-0 polynomial of a denominator (or power base) is not invertible."""


class DomainError(AdomianError, ArithmeticError):
    """Sampled arguments leave the domain where the nonlinearity is analytic."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class AccuracyError(AdomianError):
    """Adaptive quadrature hit its node cap before converging."""

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class CostError(AdomianError):
    """Nested quadrature would exceed its evaluation budget."""


__all__ = [
    "AccuracyError",
    "AdomianError",
    "CostError",
    "DomainError",
    "EvaluationError",
    "ExprError",
    "OrderError",
    "ParseError",
    "SeriesError",
    "SingularDenominatorError",
    "SingularSeriesError",
    "UnsupportedError",
]
