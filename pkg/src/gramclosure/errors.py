"""Exception types raised by the closure library."""


class ClosureError(ValueError):
    """Base class for all errors raised by this package."""


class OrderTooHighError(ClosureError):
    """Requested Gram order needs more moments than were supplied."""


class MissingMomentError(ClosureError):
    """A quantity needs a moment index beyond the supplied vector."""


class NotPositiveDefiniteError(ClosureError):
    """Cholesky factorization of a Gram matrix failed."""


class ParityError(ClosureError):
    """Closure kind does not match the parity of the maximal order M."""


class ZeroDenominatorError(ClosureError):
    """A sigma denominator vanished (boundary of realizability)."""


class NegativeTemperatureError(ClosureError):
    """Central second moment is not positive."""


class InfeasibleError(ClosureError):
    """No nonnegative grid function reproduces the given moments."""


class NotConvergedError(ClosureError):
    """Iterative solver hit its iteration cap.

    The partially converged solution is kept on ``self.solution``.
    """

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class QuadratureError(ClosureError):
    """Adaptive quadrature did not reach the requested tolerance."""


class ZeroTruthError(ClosureError):
    """Relative error requested against a vanishing reference value."""


class SizeMismatchError(ClosureError):
    """Root sets have incompatible sizes for an interlacing test."""


class ConfigError(ClosureError):
    """Malformed sweep configuration."""
