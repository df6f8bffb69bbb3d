"""Exception hierarchy shared by every bzeta module.

The CLI maps these onto exit codes: precondition errors exit with 2,
convergence failures with 3 and malformed jobs with 4.
"""


class BZetaError(Exception):
    """Base class for all library errors."""


class PreconditionError(BZetaError, ValueError):
    """An input lies outside the documented domain of an operation."""


class DomainError(PreconditionError):
    """A parameter triple is not in the set an operation requires."""


class DimensionError(PreconditionError, IndexError):
    """Mismatched dimensions or an index outside ``range(N)``."""


class PoleError(PreconditionError, ZeroDivisionError):
    """Evaluation at (or numerically too close to) a pole."""


class NotFixedError(PreconditionError):
    """A group element does not fix the supplied point."""


class CaseAmbiguityError(PreconditionError):
    """A cocycle value is too close to 1 to select a case reliably."""


class SeriesError(BZetaError, ArithmeticError):
    """Base class for truncated-series failures."""


class SeriesDivisionError(SeriesError, ZeroDivisionError):
    """Division by a series whose leading coefficient vanishes."""


class TruncationError(SeriesError):
    """A coefficient beyond the known truncation order was requested."""


class ConvergenceError(BZetaError):
    """A series, quadrature or extrapolation failed to reach its tolerance."""


class IllConditionedWarning(UserWarning):
    """A computation proceeds but is expected to lose significant digits."""
