"""Simulation and high-frequency inference for the pure-jump alpha-stable CIR process."""

from .errors import (
    ConfigError,
    DegeneratePathError,
    DomainError,
    NumericalError,
    OverflowGuardError,
    PositivityError,
    QuadratureError,
    SingularHessianError,
    StableCirError,
    TailUnderflowError,
)
from .stable import (
    KernelValues,
    QuadConfig,
    ScoreKernels,
    StableLaw,
    frac_moment_m,
    levy_constant,
    shared_law,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DegeneratePathError",
    "DomainError",
    "KernelValues",
    "NumericalError",
    "OverflowGuardError",
    "PositivityError",
    "QuadConfig",
    "QuadratureError",
    "ScoreKernels",
    "SingularHessianError",
    "StableCirError",
    "StableLaw",
    "TailUnderflowError",
    "frac_moment_m",
    "levy_constant",
    "shared_law",
]
