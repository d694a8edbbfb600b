"""Exception types raised by the public API.

Every error carries a human-readable message that names the offending
entry (row, column, model index) where one exists, so callers can
surface it without re-deriving context.
"""


class EnsembleShapleyError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(EnsembleShapleyError, ValueError):
    """Input violates a documented precondition."""


class EnumerationLimitError(EnsembleShapleyError, ValueError):
    """Exact enumeration was requested for more players than the limit allows."""


class DegenerateVarianceError(EnsembleShapleyError, ValueError):
    """A Gaussian approximation needs positive variance.

    Raised when the weight variance is zero and the stability floor is
    also zero; pass a positive stability floor to proceed.
    """


class UndefinedEntropyError(EnsembleShapleyError, ValueError):
    """Entropy of an attribution vector that cannot be normalized."""


class UndefinedAUCError(EnsembleShapleyError, ValueError):
    """Ranking quality is undefined when only one class is present."""
