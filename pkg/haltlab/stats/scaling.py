"""Edge scalings of halting times and reciprocal top gaps."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from ..config import get_settings
from ..core.ensembles import SEMICIRCLE_EDGE
from ..core.errors import DegenerateSampleError, ParameterError, ScalingRegionError
from ..core.spectral import SpectralData, edge_scale
from ..logging import get_logger

LOGGER = get_logger(__name__)


@dataclass(frozen=True)
class ScalingConstants:
    """Ensemble constant C_v and top of the equilibrium support b_v."""

    c_v: float = 1.0
    b_v: float = SEMICIRCLE_EDGE

    def __post_init__(self) -> None:
        if not self.c_v > 0.0:
            raise ParameterError(f"C_v must be positive, got {self.c_v}")


def normalizer(n: int, constants: ScalingConstants) -> float:
    """C_v^{2/3} 2^{-2/3} n^{2/3}, shared by both scalings."""

    if n < 1:
        raise ParameterError("n must be positive")
    return constants.c_v ** (2.0 / 3.0) * edge_scale(n)


def scaling_ratio(n: int, epsilon: float) -> float:
    """log(1/epsilon) / log(n); infinite for n = 1."""

    if n <= 1:
        return math.inf
    return math.log(1.0 / epsilon) / math.log(n)


def in_scaling_region(n: int, epsilon: float, margin: Optional[float] = None) -> bool:
    """Whether log(1/epsilon)/log(n) >= 5/3 + margin/2."""

    margin = get_settings().scaling_margin if margin is None else margin
    if not 0.0 < margin < 1.0:
        raise ParameterError("scaling margin must lie in (0, 1)")
    return scaling_ratio(n, epsilon) >= 5.0 / 3.0 + margin / 2.0


@lru_cache(maxsize=64)
def _warn_outside_region(n: int, epsilon: float, margin: float) -> None:
    LOGGER.warning(
        "(n=%d, epsilon=%.3g) is outside the scaling region: log(1/eps)/log(n) = %.3f < %.3f",
        n,
        epsilon,
        scaling_ratio(n, epsilon),
        5.0 / 3.0 + margin / 2.0,
    )


def check_scaling_region(n: int, epsilon: float, margin: Optional[float] = None) -> bool:
    """Log a warning (once per parameter pair) if outside the scaling region."""

    margin = get_settings().scaling_margin if margin is None else margin
    inside = in_scaling_region(n, epsilon, margin)
    if not inside:
        _warn_outside_region(n, epsilon, margin)
    return inside


def theorem1_scale(t1: float, n: int, epsilon: float, constants: ScalingConstants) -> float:
    """T^(1) / (C_v^{2/3} 2^{-2/3} n^{2/3} (log(1/eps) - (2/3) log n))."""

    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    log_term = math.log(1.0 / epsilon) - (2.0 / 3.0) * math.log(n)
    if log_term <= 0.0:
        raise ScalingRegionError(
            f"log(1/eps) - (2/3) log n = {log_term:.4g} is not positive for n={n}, epsilon={epsilon:g}"
        )
    check_scaling_region(n, epsilon)
    return t1 / (normalizer(n, constants) * log_term)


def gap_scale(spectral: SpectralData, n: int, constants: ScalingConstants) -> float:
    """1 / (C_v^{2/3} 2^{-2/3} n^{2/3} (lambda_n - lambda_{n-1}))."""

    if spectral.n < 2:
        raise ParameterError("gap scaling needs at least two eigenvalues")
    gap = spectral.top_gap
    if not gap > 0.0:
        raise DegenerateSampleError("top eigenvalue gap is zero")
    return 1.0 / (normalizer(n, constants) * gap)


__all__ = [
    "ScalingConstants",
    "check_scaling_region",
    "gap_scale",
    "in_scaling_region",
    "normalizer",
    "scaling_ratio",
    "theorem1_scale",
]
