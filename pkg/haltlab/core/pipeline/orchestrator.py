"""Experiment orchestrator coordinating sampling, storage, and reporting."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Sequence, TypeVar

from ...config import ExperimentConfig, get_settings
from ...data.models import RunSummary
from ...data.storage import ResultStore
from ...logging import get_logger

LOGGER = get_logger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class SampleOrchestrator:
    """Maps a picklable per-index task over sample indices.

    Results come back in index order whatever the worker count, so a run is
    determined by its configuration and master seed alone.
    """

    def __init__(self, workers: Optional[int] = None) -> None:
        self.workers = max(1, int(workers if workers is not None else get_settings().workers))

    def map(self, task: Callable[[int], T], count: int) -> List[T]:
        return self.map_items(task, list(range(count)))

    def map_items(self, task: Callable[[R], T], items: Sequence[R]) -> List[T]:
        if self.workers == 1 or len(items) < 2:
            return [task(item) for item in items]
        chunksize = max(1, len(items) // (4 * self.workers))
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(task, items, chunksize=chunksize))


@dataclass
class RunOutcome:
    summary: RunSummary
    output_dir: Path

    @property
    def passed(self) -> bool:
        return self.summary.passed


class ExperimentOrchestrator:
    """High-level coordinator for one configured experiment."""

    def __init__(self, base_dir: Optional[Path] = None, workers: Optional[int] = None) -> None:
        settings = get_settings()
        self.base_dir = Path(base_dir or settings.output_dir)
        self.workers = workers

    def _run_dir(self, config: ExperimentConfig) -> Path:
        if config.output_dir is not None:
            return Path(config.output_dir)
        return self.base_dir / f"{config.kind.value}-{config.config_hash()}"

    def run(self, config: ExperimentConfig) -> RunOutcome:
        from ...experiments.factory import resolve_experiment

        run_dir = self._run_dir(config)
        store = ResultStore(run_dir, config.config_hash(), config.seed)
        store.initialize()
        store.write_config(config.canonical_lines())

        workers = self.workers if self.workers is not None else config.workers
        experiment = resolve_experiment(config.kind, config, SampleOrchestrator(workers))

        LOGGER.info("Starting %s run %s in %s", config.kind.value, config.config_hash(), run_dir)
        start = time.monotonic()
        summary = experiment.run(store)
        if summary.skipped:
            LOGGER.warning("%d of %d samples were skipped", summary.skipped, summary.samples)
        for check in summary.checks:
            if not check.passed:
                LOGGER.error(
                    "Check %s failed: value=%s threshold=%s %s",
                    check.name,
                    check.value,
                    check.threshold,
                    check.detail,
                )
        store.write_summary(summary)
        LOGGER.info("Finished %s in %.1fs (passed=%s)", config.kind.value, time.monotonic() - start, summary.passed)
        return RunOutcome(summary=summary, output_dir=run_dir)


__all__ = ["ExperimentOrchestrator", "RunOutcome", "SampleOrchestrator"]
