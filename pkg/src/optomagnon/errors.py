"""Exception hierarchy shared by all modules."""


class OptomagnonError(Exception):
    """Base class for every error raised by this package."""


class NumericalError(OptomagnonError):
    """A computation could not produce a valid result."""


class NotStable(NumericalError):
    """The drift matrix has an eigenvalue with non-negative real part."""

    def __init__(self, max_real_part, message=None):
        self.max_real_part = max_real_part
        super().__init__(message or f"drift matrix is not Hurwitz (max Re(lambda) = {max_real_part:.6g})")


class DimensionMismatch(OptomagnonError, ValueError):
    pass


class InvalidCM(NumericalError, ValueError):
    """The matrix is not a physical covariance matrix."""


class SingularCM(NumericalError, ValueError):
    pass


class IndexOutOfRange(OptomagnonError, IndexError):
    pass


class NonPositiveInput(OptomagnonError, ValueError):
    pass


class NonPositiveFrequency(NonPositiveInput):
    pass


class NoConvergence(NumericalError):
    """Fixed-point iteration hit its cap; carries the last iterate."""

    def __init__(self, last, residual, iterations):
        self.last = last
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(last iterate {last!r}, residual {residual:.3g}); possible bistability"
        )


class GridTooSmall(OptomagnonError, ValueError):
    pass


class UnknownParameter(OptomagnonError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown parameter"


class ConfigError(OptomagnonError):
    """Bad configuration; the message names the offending key."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
