"""Exception types raised by hardy_lab."""


class HardyLabError(Exception):
    """Base class for every error raised by this package."""


class AliasingError(HardyLabError):
    """Grid too coarse for the trigonometric degree being integrated."""


class LengthMismatchError(HardyLabError, ValueError):
    pass


class DimensionMismatchError(HardyLabError, ValueError):
    pass


class DomainError(HardyLabError, ValueError):
    pass


class GridCoincidenceError(HardyLabError):
    """A zeta node and an eta node coincide, so the difference quotient blows up."""


class TooShortError(HardyLabError, ValueError):
    pass


class PreconditionFailed(HardyLabError):
    pass


class DominationFailed(HardyLabError):
    pass


class CertificateViolation(HardyLabError):
    """Empirical lower bound exceeded the theoretical upper bound."""


class NoConvergenceError(HardyLabError):
    def __init__(self, message, value=None, vector=None, iterations=0):
        super().__init__(message)
        self.value = value
        self.vector = vector
        self.iterations = iterations


class DegreeZeroWarning(UserWarning):
    """Difference quotient of a constant requested; the zero polynomial is returned."""
