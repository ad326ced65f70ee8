"""
Exception hierarchy shared by the simulation engines and the command line.
"""

from typing import Optional


class CavityLabError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CavityLabError, ValueError):
    """A physical quantity lies outside the domain an operation accepts."""


class ConfigurationError(CavityLabError, ValueError):
    """A configuration value is missing, unknown or invalid."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class StiffnessError(CavityLabError, RuntimeError):
    """The ODE integrator could not advance the solution."""

    def __init__(self, message: str, time: float):
        super().__init__(f"{message} (t = {time:.6g} µs)")
        self.time = time


class QuadratureError(CavityLabError, RuntimeError):
    """Adaptive quadrature did not reach the requested accuracy."""

    def __init__(self, message: str, estimate: float, abserr: float):
        super().__init__(f"{message}: estimate {estimate:.12g} ± {abserr:.3g}")
        self.estimate = estimate
        self.abserr = abserr


class VerificationError(CavityLabError, RuntimeError):
    """Full-model cross validation exceeded its tolerance."""


class NonAdiabaticWarning(UserWarning):
    """Intermediate states stay populated after the cavity transit."""
