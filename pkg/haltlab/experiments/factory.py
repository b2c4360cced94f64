"""Factory for experiment runners."""

from __future__ import annotations

from typing import Dict, Optional, Type, Union

from ..config import ExperimentConfig, ExperimentKind
from ..core.errors import ConfigurationError
from ..core.pipeline.orchestrator import SampleOrchestrator
from .base import Experiment
from .conditions import ConditionsExperiment
from .fredholm import FredholmGridExperiment
from .halting import CgHaltingExperiment, QrHaltingExperiment, TodaHaltingExperiment, UniversalityExperiment
from .lattice import LatticeDrivenExperiment, LatticeShockExperiment
from .theorem1 import Theorem1Experiment

EXPERIMENTS: Dict[ExperimentKind, Type[Experiment]] = {
    ExperimentKind.TODA_T1: TodaHaltingExperiment,
    ExperimentKind.QR_HALTING: QrHaltingExperiment,
    ExperimentKind.CG_HALTING: CgHaltingExperiment,
    ExperimentKind.UNIVERSALITY_COMPARE: UniversalityExperiment,
    ExperimentKind.THEOREM1: Theorem1Experiment,
    ExperimentKind.CONDITIONS: ConditionsExperiment,
    ExperimentKind.LATTICE_SHOCK: LatticeShockExperiment,
    ExperimentKind.LATTICE_DRIVEN: LatticeDrivenExperiment,
    ExperimentKind.FREDHOLM_GRID: FredholmGridExperiment,
}


def _normalise(kind: Union[str, ExperimentKind]) -> ExperimentKind:
    if isinstance(kind, ExperimentKind):
        return kind
    name = kind.strip().lower().replace("_", "-")
    try:
        return ExperimentKind(name)
    except ValueError as exc:
        raise ConfigurationError(f"Unknown experiment kind: {kind}") from exc


def resolve_experiment(
    kind: Union[str, ExperimentKind],
    config: ExperimentConfig,
    sampler: Optional[SampleOrchestrator] = None,
) -> Experiment:
    return EXPERIMENTS[_normalise(kind)](config, sampler)


__all__ = ["EXPERIMENTS", "resolve_experiment"]
