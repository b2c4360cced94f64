"""Empirical distributions, tau normalisation and Kolmogorov-Smirnov distances."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from scipy.stats import kstest

from ..core.errors import DegenerateSampleError, ParameterError


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Sorted sample together with its mean and unbiased standard deviation."""

    samples: np.ndarray
    mean: float
    std: float

    @classmethod
    def from_samples(cls, samples: Sequence[float]) -> "EmpiricalDistribution":
        values = np.sort(np.asarray(samples, dtype=float).ravel())
        if values.size == 0:
            raise ParameterError("an empirical distribution needs at least one sample")
        if not np.all(np.isfinite(values)):
            raise ParameterError("samples must be finite")
        values.setflags(write=False)
        std = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
        return cls(samples=values, mean=float(np.mean(values)), std=std)

    @property
    def size(self) -> int:
        return int(self.samples.shape[0])

    def cdf(self, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """Right-continuous empirical CDF."""

        result = np.searchsorted(self.samples, x, side="right") / self.size
        return float(result) if np.ndim(result) == 0 else result

    def median(self) -> float:
        return float(np.median(self.samples))


DistributionLike = Union[EmpiricalDistribution, Sequence[float], np.ndarray]


def as_distribution(data: DistributionLike) -> EmpiricalDistribution:
    if isinstance(data, EmpiricalDistribution):
        return data
    return EmpiricalDistribution.from_samples(data)


def tau_normalize(distribution: DistributionLike) -> EmpiricalDistribution:
    """Map each sample x to (x - mean) / std."""

    distribution = as_distribution(distribution)
    if distribution.size < 2:
        raise DegenerateSampleError("tau normalisation needs at least two samples")
    if not distribution.std > 0.0:
        raise DegenerateSampleError("tau normalisation is undefined for zero sample variance")
    return EmpiricalDistribution.from_samples((distribution.samples - distribution.mean) / distribution.std)


def ks_two_sample(first: DistributionLike, second: DistributionLike) -> float:
    """Sup-norm distance between two empirical CDFs.

    Both CDFs are evaluated on the merged sample points, which is exact in
    the presence of ties.
    """

    a = as_distribution(first).samples
    b = as_distribution(second).samples
    merged = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, merged, side="right") / a.size
    cdf_b = np.searchsorted(b, merged, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))


def ks_to_reference(distribution: DistributionLike, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """One-sample KS distance to a continuous reference CDF."""

    samples = as_distribution(distribution).samples
    return float(kstest(samples, cdf).statistic)


__all__ = [
    "DistributionLike",
    "EmpiricalDistribution",
    "as_distribution",
    "ks_to_reference",
    "ks_two_sample",
    "tau_normalize",
]
