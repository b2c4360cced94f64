"""Spectral conditions on the top of the spectrum and their empirical frequencies."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np

from ..core.ensembles import SEMICIRCLE_EDGE, EnsembleKind, EnsembleSpec, stream_sample
from ..core.errors import ParameterError
from ..core.spectral import SpectralData, semicircle_quantiles, spectral_data
from ..logging import get_logger

LOGGER = get_logger(__name__)

MIN_TABLE_SAMPLES = 100


def _require_three(spectral: SpectralData) -> None:
    if spectral.n < 3:
        raise ParameterError("spectral conditions need at least three eigenvalues")


def condition1(spectral: SpectralData, p: float) -> bool:
    """lambda_{n-1} - lambda_{n-2} >= p (lambda_n - lambda_{n-1})."""

    if not 0.0 < p < 1.0 / 3.0:
        raise ParameterError(f"p must lie in (0, 1/3), got {p}")
    _require_three(spectral)
    lam = spectral.eigenvalues
    return bool(lam[-2] - lam[-3] >= p * (lam[-1] - lam[-2]))


@dataclass(frozen=True)
class Condition2Result:
    """Per-clause outcome of the four-part regularity condition."""

    delocalized: bool
    top_weights: bool
    top_gaps: bool
    rigidity: bool

    @property
    def satisfied(self) -> bool:
        return self.delocalized and self.top_weights and self.top_gaps and self.rigidity

    def clauses(self) -> Dict[str, bool]:
        return {
            "i": self.delocalized,
            "ii": self.top_weights,
            "iii": self.top_gaps,
            "iv": self.rigidity,
        }


def condition2(spectral: SpectralData, s: float, b_v: float = SEMICIRCLE_EDGE) -> Condition2Result:
    """Evaluate clauses (i)-(iv) for parameter ``s``.

    (i) every beta_j <= n^{-1/2+s/2}; (ii) beta_n, beta_{n-1} >= n^{-1/2-s/2};
    (iii) n^{-2/3-s} <= lambda_n - lambda_j <= n^{-2/3+s} for j = n-1, n-2;
    (iv) |lambda_j - gamma_j| <= n^{-2/3+s} min(j, n-j+1)^{-1/3} for all j,
    where gamma_j is the j/n quantile of the semicircle on [-b_v, b_v].
    """

    if not s > 0.0:
        raise ParameterError(f"s must be positive, got {s}")
    _require_three(spectral)
    n = spectral.n
    lam = spectral.eigenvalues
    beta = spectral.first_components

    delocalized = bool(np.all(beta <= n ** (-0.5 + s / 2.0)))
    top_weights = bool(np.all(beta[-2:] >= n ** (-0.5 - s / 2.0)))
    gaps = lam[-1] - lam[-3:-1]
    top_gaps = bool(np.all((gaps >= n ** (-2.0 / 3.0 - s)) & (gaps <= n ** (-2.0 / 3.0 + s))))

    gamma = np.asarray(semicircle_quantiles(n, float(b_v)))
    j = np.arange(1, n + 1)
    bulk_distance = np.minimum(j, n - j + 1).astype(float)
    bound = n ** (-2.0 / 3.0 + s) * bulk_distance ** (-1.0 / 3.0)
    rigidity = bool(np.all(np.abs(lam - gamma) <= bound))
    return Condition2Result(delocalized, top_weights, top_gaps, rigidity)


@dataclass
class ProbabilityTable:
    """Empirical probabilities indexed by (n, parameter)."""

    parameter: str
    rows: List[Dict[str, float]] = field(default_factory=list)

    def value(self, n: int, parameter: float, column: str = "probability") -> float:
        for row in self.rows:
            if row["n"] == n and row[self.parameter] == parameter:
                return row[column]
        raise KeyError((n, parameter))


def condition1_table(spectra_by_n: Mapping[int, Sequence[SpectralData]], p_grid: Iterable[float]) -> ProbabilityTable:
    """Empirical P(condition 1 fails) for every n and p."""

    p_values = list(p_grid)
    if not p_values:
        raise ParameterError("p grid must not be empty")
    table = ProbabilityTable(parameter="p")
    for n in sorted(spectra_by_n):
        spectra = spectra_by_n[n]
        for p in p_values:
            failures = sum(1 for spectral in spectra if not condition1(spectral, p))
            table.rows.append(
                {"n": n, "p": p, "probability": failures / len(spectra), "samples": len(spectra)}
            )
    return table


def condition2_table(
    spectra_by_n: Mapping[int, Sequence[SpectralData]], s: float, b_v: float = SEMICIRCLE_EDGE
) -> ProbabilityTable:
    """Empirical P(condition 2 holds) with per-clause frequencies."""

    table = ProbabilityTable(parameter="s")
    for n in sorted(spectra_by_n):
        spectra = spectra_by_n[n]
        results = [condition2(spectral, s, b_v) for spectral in spectra]
        row: Dict[str, float] = {"n": n, "s": s, "samples": len(results)}
        row["probability"] = sum(result.satisfied for result in results) / len(results)
        for clause in ("i", "ii", "iii", "iv"):
            row[f"clause_{clause}"] = sum(result.clauses()[clause] for result in results) / len(results)
        table.rows.append(row)
    return table


def condition1_limit_check(
    ensemble: EnsembleKind,
    p_grid: Sequence[float],
    n_grid: Sequence[int],
    samples: int,
    master_seed: int = 0,
    spectra_by_n: Optional[Mapping[int, Sequence[SpectralData]]] = None,
) -> ProbabilityTable:
    """Tabulate P(condition 1 fails) over a p grid for each n.

    The same matrices are reused across p, so each row of the table is
    monotone in p.
    """

    if samples < MIN_TABLE_SAMPLES:
        raise ParameterError(f"at least {MIN_TABLE_SAMPLES} samples are required, got {samples}")
    if not n_grid:
        raise ParameterError("n grid must not be empty")
    if spectra_by_n is None:
        spectra_by_n = {
            n: [spectral_data(stream_sample(EnsembleSpec(ensemble, n), master_seed, index)) for index in range(samples)]
            for n in n_grid
        }
    return condition1_table(spectra_by_n, p_grid)


__all__ = [
    "Condition2Result",
    "MIN_TABLE_SAMPLES",
    "ProbabilityTable",
    "condition1",
    "condition1_limit_check",
    "condition1_table",
    "condition2",
    "condition2_table",
]
