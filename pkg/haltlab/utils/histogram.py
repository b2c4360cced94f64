"""Histogram helpers for exporting empirical distributions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np


@dataclass(slots=True)
class Histogram:
    """Fixed-width histogram with counts and normalised densities."""

    edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def rows(self) -> List[Tuple[float, int, float]]:
        return [
            (float(center), int(count), float(dens))
            for center, count, dens in zip(self.centers, self.counts, self.density)
        ]


def build_histogram(samples: Sequence[float], bins: Union[str, int] = "fd") -> Histogram:
    """Bin ``samples`` with fixed-width bins (Freedman-Diaconis by default)."""

    values = np.asarray(samples, dtype=float)
    if values.size == 0:
        raise ValueError("cannot build a histogram from an empty sample")
    if isinstance(bins, str) and bins.isdigit():
        bins = int(bins)
    if values.size == 1 or np.ptp(values) == 0.0:
        bins = 1
    counts, edges = np.histogram(values, bins=bins)
    widths = np.diff(edges)
    density = counts / (values.size * widths)
    return Histogram(edges=edges, counts=counts, density=density)


__all__ = ["Histogram", "build_histogram"]
