"""Exception types raised by the solver library."""


class UrysohnError(Exception):
    """Base class for all library errors."""


class UnsupportedRuleError(UrysohnError, ValueError):
    """Requested quadrature rule is outside the supported range."""


class DomainError(UrysohnError, ValueError):
    """Evaluation point lies outside [0, 1]."""


class NonFiniteValueError(UrysohnError, ValueError):
    """A sampled function produced NaN or infinity."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class PreconditionError(UrysohnError, ValueError):
    """Inputs violate a documented precondition."""


class ShapeError(UrysohnError, ValueError):
    """Grid data does not match the quadrature rule it is used with."""


class SingularJacobianError(UrysohnError, ArithmeticError):
    """Newton's method hit a singular Jacobian."""

    def __init__(self, message, iteration):
        super().__init__(message)
        self.iteration = iteration


class DivergenceError(UrysohnError, ArithmeticError):
    """Newton's method did not reach the residual tolerance."""

    def __init__(self, message, residual, iterations):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class ConfigurationError(UrysohnError, ValueError):
    """Study or CLI configuration is invalid."""
