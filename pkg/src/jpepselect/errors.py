"""Exception hierarchy for jpepselect.

All library errors derive from :class:`JpepError` so callers can catch one
base type. Each subclass marks a distinct failure mode referenced in the
operation contracts (invalid model, singular design, degenerate data, ...).
"""

__all__ = [
    "JpepError",
    "InvalidModelError",
    "SingularDesignError",
    "InsufficientDataError",
    "DegenerateDataError",
    "DomainError",
    "UnderflowError",
    "CapacityError",
    "ParseError",
]


class JpepError(Exception):
    """Base class for all jpepselect errors."""


class InvalidModelError(JpepError):
    """A model references covariate indices outside 1..p."""


class SingularDesignError(JpepError):
    """Model design matrix is rank deficient at working tolerance.

    Carries the offending column set when known.
    """

    def __init__(self, message, columns=None):
        super().__init__(message)
        self.columns = tuple(columns) if columns is not None else ()


class InsufficientDataError(JpepError):
    """Fewer observations than model parameters (n < d)."""


class DegenerateDataError(JpepError):
    """RSS is zero (saturated fit); log-scale scores are undefined."""


class DomainError(JpepError):
    """Function argument outside its mathematical domain."""


class UnderflowError(JpepError):
    """All quadrature node values are -inf; integral underflowed."""


class CapacityError(JpepError):
    """Model space too large for exhaustive enumeration."""


class ParseError(JpepError):
    """Malformed input file; message names the row and column."""
