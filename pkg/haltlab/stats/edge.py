"""Statistics of the top eigenvector weights and the scaled edge triple."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import halfnorm, rayleigh

from ..core.ensembles import SEMICIRCLE_EDGE
from ..core.errors import ParameterError
from ..core.spectral import SpectralData, gap_stats
from ..logging import get_logger
from .empirical import ks_to_reference, ks_two_sample

LOGGER = get_logger(__name__)

MIN_EDGE_SAMPLES = 100
DEGENERATE_GAP = 1e-8


def weight_reference_cdf(beta: int) -> Callable[[np.ndarray], np.ndarray]:
    """Limit law of sqrt(n) beta_j: |N(0,1)| for beta=1, |complex N(0,1)| for beta=2."""

    if beta == 1:
        return halfnorm.cdf
    if beta == 2:
        return rayleigh(scale=1.0 / np.sqrt(2.0)).cdf
    raise ParameterError(f"symmetry class must be 1 or 2, got {beta}")


@dataclass(frozen=True)
class EdgeReport:
    n: int
    beta: int
    samples: int
    scaled_weights: np.ndarray
    scaled_triples: np.ndarray
    weight_ks: Tuple[float, float, float]
    degenerate_triples: int
    cross_n_ks: Optional[Tuple[float, float, float]] = None
    reference_n: Optional[int] = None

    def passed(self, threshold: float) -> bool:
        checks = list(self.weight_ks) + list(self.cross_n_ks or ())
        return self.degenerate_triples == 0 and all(value < threshold for value in checks)

    def summary(self) -> dict:
        payload = {
            "n": self.n,
            "beta": self.beta,
            "samples": self.samples,
            "weight_ks_top": self.weight_ks[0],
            "weight_ks_second": self.weight_ks[1],
            "weight_ks_third": self.weight_ks[2],
            "degenerate_triples": self.degenerate_triples,
        }
        if self.cross_n_ks is not None:
            payload["reference_n"] = self.reference_n
            for label, value in zip(("top", "second", "third"), self.cross_n_ks):
                payload[f"cross_n_ks_{label}"] = value
        return payload


def cross_n_drift(report: EdgeReport, reference: EdgeReport) -> Tuple[float, float, float]:
    """KS distance between the scaled edge triples of two runs, per coordinate."""

    return tuple(  # type: ignore[return-value]
        ks_two_sample(report.scaled_triples[:, k], reference.scaled_triples[:, k]) for k in range(3)
    )


def edge_statistics_suite(
    spectra: Sequence[SpectralData],
    n: int,
    b_v: float = SEMICIRCLE_EDGE,
    beta: int = 1,
    reference: Optional[EdgeReport] = None,
) -> EdgeReport:
    """Compare sqrt(n) beta_j (j = n, n-1, n-2) with their limit law and collect edge triples."""

    if len(spectra) < MIN_EDGE_SAMPLES:
        raise ParameterError(f"edge statistics need at least {MIN_EDGE_SAMPLES} samples, got {len(spectra)}")
    scale = np.sqrt(n)
    weights = np.array([[scale * spectral.first_components[-k] for k in (1, 2, 3)] for spectral in spectra])
    triples = []
    degenerate = 0
    for spectral in spectra:
        stats = gap_stats(spectral, n, b_v)
        triples.append(stats.scaled_edge_triple)
        if min(stats.top_gap, stats.second_gap) < DEGENERATE_GAP:
            degenerate += 1
    if degenerate:
        LOGGER.warning("%d of %d samples have a near-degenerate top triple", degenerate, len(spectra))

    cdf = weight_reference_cdf(beta)
    weight_ks = tuple(ks_to_reference(weights[:, k], cdf) for k in range(3))
    report = EdgeReport(
        n=n,
        beta=beta,
        samples=len(spectra),
        scaled_weights=weights,
        scaled_triples=np.array(triples),
        weight_ks=weight_ks,  # type: ignore[arg-type]
        degenerate_triples=degenerate,
    )
    if reference is not None:
        report = replace(report, cross_n_ks=cross_n_drift(report, reference), reference_n=reference.n)
    return report


__all__ = [
    "DEGENERATE_GAP",
    "EdgeReport",
    "MIN_EDGE_SAMPLES",
    "cross_n_drift",
    "edge_statistics_suite",
    "weight_reference_cdf",
]
