"""Exception types shared across the package."""


class QorbifoldError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(QorbifoldError, ValueError):
    """Ranks or matrix shapes of the operands do not agree."""


class ParameterError(QorbifoldError, ValueError):
    """A constructor or operation received parameters outside its domain."""


class UnsupportedOrderError(ParameterError):
    pass


class InfiniteFixedSetError(QorbifoldError, ValueError):
    """rho(g) - I is singular, so the fixed set on the torus is not finite."""


class NumericalFailure(QorbifoldError, ArithmeticError):
    """An extrapolation did not settle; ``estimates`` holds what was seen."""

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = list(estimates)


class PreconditionError(QorbifoldError, ValueError):
    pass


class RegularityError(QorbifoldError, RuntimeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IntegrityError(QorbifoldError, RuntimeError):
    """Two routes that must agree (e.g. exact vs modular ranks) did not."""


class ResourceError(QorbifoldError, RuntimeError):
    pass


class ValidationError(QorbifoldError, ValueError):
    """An instance violates an invariant; ``path`` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
