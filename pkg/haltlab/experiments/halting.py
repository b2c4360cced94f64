"""Halting-time experiments for the Toda, QR and conjugate gradient algorithms."""

from __future__ import annotations

from functools import partial
from typing import List, Optional, Tuple

import numpy as np

from ..core.ensembles import EnsembleKind, EnsembleSpec
from ..core.errors import ConfigurationError, ScalingRegionError
from ..data.models import CgRecord, HaltingRecord, RunSummary
from ..data.storage import ResultStore
from ..logging import get_logger
from ..stats.empirical import ks_two_sample
from ..stats.scaling import ScalingConstants, theorem1_scale
from .base import Experiment, flag_check, threshold_check
from .tasks import HaltingSample, cg_sample, qr_sample, toda_sample

LOGGER = get_logger(__name__)


def collect_halting(
    experiment: Experiment, ensemble: EnsembleKind, algorithm: str
) -> Tuple[List[HaltingSample], int]:
    """Run the configured sample stream; returns (samples, skipped count)."""

    config = experiment.config
    spec = EnsembleSpec(ensemble, config.n)
    if algorithm == "qr":
        task = partial(qr_sample, spec, config.seed, config.epsilon, config.k_max)
    else:
        task = partial(toda_sample, spec, config.seed, config.epsilon)
    samples = experiment.sampler.map(task, config.samples)
    skipped = [sample for sample in samples if sample.skipped is not None]
    for sample in skipped:
        LOGGER.debug("Sample %d skipped: %s", sample.index, sample.skipped)
    return samples, len(skipped)


def halting_records(samples: List[HaltingSample], ensemble: EnsembleKind, algorithm: str, n: int, epsilon: float) -> List[HaltingRecord]:
    return [
        HaltingRecord(
            index=sample.index,
            ensemble=ensemble.value,
            algorithm=algorithm,
            n=n,
            epsilon=epsilon,
            halting_time=sample.halting_time,
            error=sample.error,
            halted=sample.halted,
        )
        for sample in samples
        if sample.skipped is None
    ]


def halted_times(samples: List[HaltingSample]) -> np.ndarray:
    return np.array([sample.halting_time for sample in samples if sample.skipped is None and sample.halted])


class TodaHaltingExperiment(Experiment):
    """T^(1) records, the tau histogram, theorem-1 scaled times and the corollary error."""

    def run(self, store: ResultStore) -> RunSummary:
        config = self.config
        summary = self.new_summary()
        samples, skipped = collect_halting(self, config.ensemble, "toda")
        summary.samples = len(samples)
        summary.skipped = skipped

        store.write_records("halting.csv", halting_records(samples, config.ensemble, "toda", config.n, config.epsilon))
        times = halted_times(samples)
        self.write_tau_histogram(store, "tau_histogram.csv", times)

        constants = ScalingConstants(c_v=config.c_v, b_v=config.b_v)
        try:
            scaled = [theorem1_scale(t, config.n, config.epsilon, constants) for t in times]
        except ScalingRegionError as exc:
            LOGGER.warning("halting-time scaling skipped: %s", exc)
        else:
            store.write_samples("theorem1_scaled.csv", "scaled_t1", scaled)

        errors = np.array([sample.error for sample in samples if sample.skipped is None])
        corollary = errors / config.epsilon
        store.write_samples("corollary.csv", "scaled_error", corollary)
        if times.size:
            summary.metrics.update(
                {
                    "mean_t1": float(np.mean(times)),
                    "median_t1": float(np.median(times)),
                    "median_corollary_error": float(np.median(corollary)),
                    "max_eigenvalue_error": float(np.max(errors)),
                }
            )
            if not config.ensemble.is_debug:
                summary.checks.append(
                    threshold_check("eigenvalue_error_below_epsilon", float(np.max(errors)), config.epsilon)
                )
        return summary


class QrHaltingExperiment(Experiment):
    """Unshifted QR halting counts; non-halting runs are kept and counted."""

    def run(self, store: ResultStore) -> RunSummary:
        config = self.config
        summary = self.new_summary()
        samples, skipped = collect_halting(self, config.ensemble, "qr")
        summary.samples = len(samples)
        summary.skipped = skipped
        store.write_records("halting.csv", halting_records(samples, config.ensemble, "qr", config.n, config.epsilon))

        non_halting = sum(1 for sample in samples if not sample.halted)
        if non_halting:
            LOGGER.warning("%d of %d QR runs did not halt within k_max=%d", non_halting, len(samples), config.k_max)
        summary.metrics["non_halting"] = float(non_halting)
        counts = halted_times(samples)
        self.write_tau_histogram(store, "tau_histogram.csv", counts)
        if counts.size:
            summary.metrics["mean_iterations"] = float(np.mean(counts))
        errors = [sample.error for sample in samples if sample.halted]
        if errors:
            summary.metrics["max_dominant_error"] = float(np.max(errors))
        return summary


class CgHaltingExperiment(Experiment):
    """Conjugate gradient iteration counts on Wishart systems with m = ratio * n."""

    def run(self, store: ResultStore) -> RunSummary:
        config = self.config
        summary = self.new_summary()
        m = int(np.ceil(config.m_ratio * config.n))
        task = partial(cg_sample, config.n, m, config.seed, config.epsilon, config.k_max)
        samples = self.sampler.map(task, config.samples)
        summary.samples = len(samples)
        records = [
            CgRecord(
                index=sample.index,
                n=config.n,
                m=m,
                epsilon=config.epsilon,
                iterations=sample.iterations,
                residual=sample.residual,
                halted=sample.halted,
            )
            for sample in samples
        ]
        store.write_records("halting.csv", records)
        counts = np.array([sample.iterations for sample in samples if sample.halted], dtype=float)
        self.write_tau_histogram(store, "tau_histogram.csv", counts)
        non_halting = sum(1 for sample in samples if not sample.halted)
        summary.metrics["non_halting"] = float(non_halting)
        if counts.size:
            summary.metrics["mean_iterations"] = float(np.mean(counts))
        summary.checks.append(flag_check("all_runs_halted", non_halting == 0, value=float(non_halting)))
        return summary


class UniversalityExperiment(Experiment):
    """Compare tau samples across two ensembles or across two algorithms."""

    def _arms(self) -> List[Tuple[EnsembleKind, str]]:
        config = self.config
        if config.compare_ensemble is not None:
            return [(config.ensemble, config.algorithm), (config.compare_ensemble, config.algorithm)]
        if config.compare_algorithm is not None:
            return [(config.ensemble, config.algorithm), (config.ensemble, config.compare_algorithm)]
        raise ConfigurationError("universality-compare needs compare_ensemble or compare_algorithm")

    def run(self, store: ResultStore) -> RunSummary:
        summary = self.new_summary()
        taus: List[Optional[np.ndarray]] = []
        for ensemble, algorithm in self._arms():
            samples, skipped = collect_halting(self, ensemble, algorithm)
            summary.samples += len(samples)
            summary.skipped += skipped
            label = f"{ensemble.value}-{algorithm}"
            store.write_records(
                f"halting_{label}.csv",
                halting_records(samples, ensemble, algorithm, self.config.n, self.config.epsilon),
            )
            taus.append(self.write_tau_histogram(store, f"tau_histogram_{label}.csv", halted_times(samples)))

        if taus[0] is None or taus[1] is None:
            summary.checks.append(flag_check("tau_defined", False, "tau undefined for one of the arms"))
            return summary
        distance = ks_two_sample(taus[0], taus[1])
        summary.metrics["tau_ks"] = distance
        if self.config.compare_ensemble is not None:
            summary.checks.append(threshold_check("tau_universality_ks", distance, self.ks_threshold))
        return summary


__all__ = [
    "CgHaltingExperiment",
    "QrHaltingExperiment",
    "TodaHaltingExperiment",
    "UniversalityExperiment",
    "collect_halting",
]
