"""Experiment abstractions."""

from __future__ import annotations

import abc
from typing import Iterable, List, Optional, Sequence

import numpy as np

from ..config import ExperimentConfig, get_settings
from ..core.pipeline.orchestrator import SampleOrchestrator
from ..data.models import CheckResult, RunSummary
from ..data.storage import ResultStore
from ..logging import get_logger
from ..stats.empirical import tau_normalize
from ..utils.histogram import build_histogram

LOGGER = get_logger(__name__)


class Experiment(abc.ABC):
    """Run one configured experiment and report its checks."""

    def __init__(self, config: ExperimentConfig, sampler: Optional[SampleOrchestrator] = None) -> None:
        self.config = config
        self.sampler = sampler or SampleOrchestrator(config.workers)

    @abc.abstractmethod
    def run(self, store: ResultStore) -> RunSummary:
        raise NotImplementedError

    def new_summary(self) -> RunSummary:
        return RunSummary(
            kind=self.config.kind.value,
            config_hash=self.config.config_hash(),
            seed=self.config.seed,
        )

    @property
    def ks_threshold(self) -> float:
        if self.config.ks_threshold is not None:
            return self.config.ks_threshold
        return get_settings().ks_threshold

    def write_tau_histogram(self, store: ResultStore, name: str, values: Sequence[float]) -> Optional[np.ndarray]:
        """Write the tau histogram of ``values``; returns the tau sample or None if undefined."""

        if len(values) < 2 or float(np.ptp(values)) == 0.0:
            LOGGER.info("Skipping %s: tau is undefined for %d sample(s) without spread", name, len(values))
            return None
        tau = tau_normalize(values).samples
        store.write_histogram(name, build_histogram(tau, get_settings().histogram_bins))
        return tau


def threshold_check(name: str, value: float, threshold: float, detail: str = "") -> CheckResult:
    return CheckResult(name=name, passed=bool(value < threshold), value=value, threshold=threshold, detail=detail)


def flag_check(name: str, passed: bool, detail: str = "", value: Optional[float] = None) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), value=value, detail=detail)


def is_nonincreasing(values: Iterable[float], slack: float = 0.0) -> bool:
    items: List[float] = list(values)
    return all(later <= earlier + slack for earlier, later in zip(items, items[1:]))


__all__ = ["Experiment", "flag_check", "is_nonincreasing", "threshold_check"]
