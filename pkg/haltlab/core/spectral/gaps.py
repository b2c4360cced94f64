"""Edge gaps and semicircle quantiles."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from ..ensembles import SEMICIRCLE_EDGE
from ..errors import ParameterError
from .base import GapStatistics, SpectralData

EDGE_PREFACTOR = 2.0 ** (-2.0 / 3.0)


def edge_scale(n: int) -> float:
    """Return 2^{-2/3} n^{2/3}, the edge zoom shared by gaps and halting times."""

    return EDGE_PREFACTOR * float(n) ** (2.0 / 3.0)


def gap_stats(spectral: SpectralData, n: int, b_v: float = SEMICIRCLE_EDGE) -> GapStatistics:
    if n < 3 or spectral.n < 3:
        raise ParameterError("gap statistics need at least three eigenvalues")
    lam = spectral.eigenvalues
    zoom = edge_scale(n)
    triple = tuple(float(zoom * (b_v - lam[-k])) for k in (1, 2, 3))
    return GapStatistics(
        top_gap=float(lam[-1] - lam[-2]),
        second_gap=float(lam[-2] - lam[-3]),
        scaled_edge_triple=triple,  # type: ignore[arg-type]
    )


def semicircle_cdf(x: float) -> float:
    """CDF of (1/2pi) sqrt(4 - x^2) dx on [-2, 2]."""

    if x <= -2.0:
        return 0.0
    if x >= 2.0:
        return 1.0
    return 0.5 + x * np.sqrt(4.0 - x * x) / (4.0 * np.pi) + np.arcsin(x / 2.0) / np.pi


def semicircle_quantile(q: float, b_v: float = SEMICIRCLE_EDGE) -> float:
    """Smallest b with semicircle_cdf(b) = q, for q in (0, 1].

    The result is rescaled to a semicircle supported on ``[-b_v, b_v]``.
    """

    if not 0.0 < q <= 1.0:
        raise ParameterError(f"quantile level must lie in (0, 1], got {q}")
    if not b_v > 0.0:
        raise ParameterError(f"b_v must be positive, got {b_v}")
    if q == 1.0:
        return float(b_v)
    value = brentq(lambda x: semicircle_cdf(x) - q, -2.0, 2.0, xtol=1e-13, rtol=4 * np.finfo(float).eps)
    return float(value) * b_v / SEMICIRCLE_EDGE


@lru_cache(maxsize=32)
def semicircle_quantiles(n: int, b_v: float = SEMICIRCLE_EDGE) -> tuple[float, ...]:
    """Quantiles gamma_j for j/n, j = 1..n (cached per dimension)."""

    return tuple(semicircle_quantile(j / n, b_v) for j in range(1, n + 1))


__all__ = [
    "EDGE_PREFACTOR",
    "edge_scale",
    "gap_stats",
    "semicircle_cdf",
    "semicircle_quantile",
    "semicircle_quantiles",
]
