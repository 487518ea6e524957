"""Exception types shared across the package."""


class StableCirError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(StableCirError):
    """Invalid experiment or CLI configuration (exit code 1)."""


class NumericalError(StableCirError):
    """Base class for numerical failures (exit code 2)."""


class DomainError(NumericalError):
    """Parameter or argument outside the mathematically valid domain."""


class QuadratureError(NumericalError):
    """A quadrature did not converge to the requested tolerance."""


class TailUnderflowError(NumericalError):
    """Density evaluation requested below the left-tail floor (phi < 1e-300)."""


class DegeneratePathError(NumericalError):
    """A path is constant/linear or otherwise uninformative for estimation."""


class SingularHessianError(NumericalError):
    """A (preconditioned) hessian block is numerically singular."""


class PositivityError(NumericalError):
    """A matrix expected to be positive definite is not."""


class OverflowGuardError(NumericalError):
    """A simulated path exceeded the overflow guard (diagnostic for absurd theta)."""
