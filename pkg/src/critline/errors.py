"""Exception hierarchy shared by all critline modules."""


class CritlineError(Exception):
    """Base class for every error raised by the package."""


class DomainError(CritlineError, ValueError):
    """Argument outside the domain where the representation converges."""


class PoleError(DomainError):
    """Argument sits on a pole of the function."""


class AccuracyError(CritlineError, ArithmeticError):
    """Requested accuracy could not be reached, or a result was non-finite."""


class NonRealNormError(CritlineError):
    """Norm of a generic label fails the Hermiticity (reality) test.

    The computed value and residual are attached so callers can report them.
    """

    def __init__(self, message, value=None, residual=None):
        super().__init__(message)
        self.value = value
        self.residual = residual


class ScanError(CritlineError):
    """Zero scan step too coarse for the observed zero spacing."""


class InsufficientDataError(CritlineError, ValueError):
    pass


class ConvergenceError(CritlineError, ArithmeticError):
    pass


class DimensionError(CritlineError, ValueError):
    pass


class SingularMetricError(CritlineError, ArithmeticError):
    pass


class CacheFormatError(CritlineError):
    pass


class CacheStaleError(CritlineError):
    pass
