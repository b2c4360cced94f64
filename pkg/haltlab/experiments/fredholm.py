"""Sine-kernel gap probabilities over a grid of s."""

from __future__ import annotations

from functools import partial
from typing import List, Optional

from ..config import ExperimentConfig
from ..core.fredholm import discretize, eigenvalues, fredholm_determinant, product_identity, simulate_coin_flips
from ..data.models import FredholmRecord, RunSummary
from ..data.storage import ResultStore
from ..logging import get_logger
from ..utils.seeding import derive_seed
from .base import Experiment, flag_check, threshold_check

LOGGER = get_logger(__name__)

REPORTED_EIGENVALUES = 8
PRODUCT_TOLERANCE = 1e-10


def grid_point(config: ExperimentConfig, index: int) -> FredholmRecord:
    s = config.s_grid[index]
    result = fredholm_determinant(s, nodes=config.fredholm_nodes)
    discretization = discretize(s, result.nodes)
    identity = product_identity(discretization)
    spectrum = eigenvalues(discretization)
    coin: Optional[float] = None
    if config.samples > 1:
        coin = simulate_coin_flips(spectrum, config.samples, derive_seed(config.seed, index))
    return FredholmRecord(
        s=s,
        determinant=result.value,
        nodes=result.nodes,
        refinement_delta=result.refinement_delta,
        converged=result.converged,
        product=identity.product,
        coin_flip_estimate=coin,
        eigenvalues=[float(value) for value in spectrum[:REPORTED_EIGENVALUES]],
    )


class FredholmGridExperiment(Experiment):
    """F_s with refinement metadata, the product identity and leading eigenvalues."""

    def run(self, store: ResultStore) -> RunSummary:
        config = self.config
        summary = self.new_summary()
        records: List[FredholmRecord] = self.sampler.map(partial(grid_point, config), len(config.s_grid))
        summary.samples = len(records)

        columns = ["s", "determinant", "nodes", "refinement_delta", "converged", "product", "coin_flip_estimate"]
        labels = [f"lambda_{k + 1}" for k in range(REPORTED_EIGENVALUES)]
        store.write_rows(
            "fredholm.csv",
            columns + labels,
            ([getattr(record, column) for column in columns] + record.eigenvalues for record in records),
        )

        ordered = sorted(records, key=lambda record: record.s)
        values = [record.determinant for record in ordered]
        summary.checks.append(
            flag_check(
                "determinant_strictly_decreasing",
                all(later < earlier for earlier, later in zip(values, values[1:])),
            )
        )
        summary.checks.append(
            flag_check("determinant_in_unit_interval", all(0.0 < value <= 1.0 for value in values))
        )
        summary.checks.append(flag_check("refinement_converged", all(record.converged for record in records)))
        worst = max(abs(record.determinant - record.product) for record in records)
        summary.metrics["max_product_difference"] = worst
        summary.checks.append(threshold_check("product_identity", worst, PRODUCT_TOLERANCE))
        return summary


__all__ = ["FredholmGridExperiment", "grid_point"]
