"""Exception hierarchy shared by the numerical engines."""

from __future__ import annotations

from typing import Optional


class HaltlabError(RuntimeError):
    """Base class for runtime failures raised by haltlab."""


class ParameterError(ValueError):
    """Raised when an operation receives arguments outside its domain."""


class ContractViolationError(ValueError):
    """Raised when an input breaks a structural precondition (e.g. self-adjointness)."""


class ConfigurationError(ValueError):
    """Raised when an experiment configuration cannot be parsed or validated."""


class DegenerateSampleError(ValueError):
    """Raised when a sample makes a statistic undefined (zero gap, zero variance)."""


class ScalingRegionError(ValueError):
    """Raised when the halting-time normalisation has a nonpositive denominator."""


class ConvergenceError(HaltlabError):
    """Raised when an iterative eigensolver exceeds its iteration cap."""

    def __init__(self, message: str, index: Optional[int] = None) -> None:
        super().__init__(message)
        self.index = index


class NonHaltingError(HaltlabError):
    """Raised when a halting-time search exceeds its cap."""


class IntegrationError(HaltlabError):
    """Raised when a time integrator leaves its region of validity."""


class LatticeBlowUpError(IntegrationError):
    """Raised when lattice positions overflow."""


__all__ = [
    "ConfigurationError",
    "ContractViolationError",
    "ConvergenceError",
    "DegenerateSampleError",
    "HaltlabError",
    "IntegrationError",
    "LatticeBlowUpError",
    "NonHaltingError",
    "ParameterError",
    "ScalingRegionError",
]
