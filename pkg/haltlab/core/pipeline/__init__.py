"""Pipeline orchestration utilities."""

from .orchestrator import ExperimentOrchestrator, RunOutcome, SampleOrchestrator

__all__ = ["ExperimentOrchestrator", "RunOutcome", "SampleOrchestrator"]
