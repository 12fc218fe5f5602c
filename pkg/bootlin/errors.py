"""Exceptions and warning categories raised by `bootlin`.

Every exception derives from `BootlinError`, so callers that do not care
about the precise failure can catch a single type. The command-line
interface maps the subclasses to its exit codes.
"""


class BootlinError(Exception):
    """Base class of all errors raised by this package."""


class DomainError(BootlinError, ValueError):
    """Raised when an argument lies outside of its admissible domain."""


class InsufficientDataError(DomainError):
    """Raised when a data-driven procedure receives too few observations."""


class DataFormatError(BootlinError, ValueError):
    """Raised when an input file cannot be parsed."""


class DegenerateDataError(BootlinError):
    """Raised when data violate an invariant of the statistical model."""


class UnsupportedOperationError(BootlinError, NotImplementedError):
    """Raised when an operation is not defined for the given object."""


class NumericError(BootlinError, ArithmeticError):
    """Raised when a numerical procedure does not reach its tolerance.

    Parameters
    ----------
    message:
        Human-readable description of the failure

    achieved:
        Tolerance that was actually achieved, if known
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class QuadratureError(NumericError):
    """Raised when a quadrature rule misses its error target."""


class FitError(NumericError):
    """Raised when a regression nuisance cannot be fitted."""


class TargetingError(NumericError):
    """Raised when TMLE targeting does not solve its score equation.

    The attribute `score` holds the last absolute empirical mean of the
    efficient influence function.
    """

    def __init__(self, message, score):
        super().__init__(message, achieved=score)
        self.score = score


class StudentizationError(NumericError):
    """Raised when a bootstrap replicate has a zero standard error."""

    def __init__(self, message, replicate):
        super().__init__(message)
        self.replicate = replicate


class ReplicateFailureError(NumericError):
    """Raised when too many bootstrap replicates fail numerically."""

    def __init__(self, message, failures, total):
        super().__init__(message, achieved=failures / max(total, 1))
        self.failures = failures
        self.total = total


class BandwidthFallbackWarning(UserWarning):
    """Sheather--Jones did not converge and Silverman's rule was used."""


class DegenerateIntervalWarning(UserWarning):
    """The bootstrap distribution is a point mass at the estimate."""
