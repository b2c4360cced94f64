"""Typer CLI entry point for haltlab."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Callable, Dict, Optional

import typer

from .config import ExperimentConfig, ExperimentKind, get_settings, list_environment_settings, load_experiment_config
from .core.errors import ConfigurationError, ParameterError, ScalingRegionError
from .core.pipeline.orchestrator import ExperimentOrchestrator, RunOutcome
from .logging import configure_logging

app = typer.Typer(help="Halting-time and integrable-lattice experiments with random data")

ConfigOption = typer.Option(None, "--config", help="Flat key=value experiment file")
SeedOption = typer.Option(None, "--seed", help="Master seed")
OutOption = typer.Option(None, "--out", help="Output directory for this run")
WorkersOption = typer.Option(None, "--workers", help="Worker processes for sampling")
NOption = typer.Option(None, "--n", help="Matrix dimension")
EpsOption = typer.Option(None, "--eps", help="Accuracy epsilon")
SamplesOption = typer.Option(None, "--samples", help="Monte Carlo sample count")


def _overrides(
    kind: Optional[ExperimentKind],
    seed: Optional[int],
    out: Optional[Path],
    workers: Optional[int],
    n: Optional[int],
    eps: Optional[float],
    samples: Optional[int],
) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {
        "seed": seed,
        "output_dir": out,
        "workers": workers,
        "n": n,
        "epsilon": eps,
        "samples": samples,
    }
    if kind is not None:
        overrides["kind"] = kind
    return overrides


def build_config(kind: Optional[ExperimentKind], config: Optional[Path], **flags: Any) -> ExperimentConfig:
    """Load ``config`` and apply CLI flags; errors become ``typer.BadParameter``."""

    overrides = _overrides(kind, **flags)
    try:
        return load_experiment_config(config, overrides)
    except (ConfigurationError, ParameterError) as exc:
        raise typer.BadParameter(str(exc)) from exc


def _report(outcome: RunOutcome) -> None:
    summary = outcome.summary
    typer.echo(f"{summary.kind} config={summary.config_hash} seed={summary.seed} -> {outcome.output_dir}")
    typer.echo(f"samples={summary.samples} skipped={summary.skipped}")
    for key in sorted(summary.metrics):
        typer.echo(f"  {key} = {summary.metrics[key]!r}")
    for check in summary.checks:
        status = "PASS" if check.passed else "FAIL"
        typer.echo(f"  [{status}] {check.name} value={check.value!r} threshold={check.threshold!r}")


def execute(experiment: ExperimentConfig) -> RunOutcome:
    configure_logging(get_settings().log_level)
    try:
        outcome = ExperimentOrchestrator().run(experiment)
    except (ConfigurationError, ParameterError, ScalingRegionError) as exc:
        raise typer.BadParameter(str(exc)) from exc
    _report(outcome)
    if not outcome.passed:
        raise typer.Exit(code=1)
    return outcome


def _make_command(kind: ExperimentKind) -> Callable[..., None]:
    def command(
        config: Optional[Path] = ConfigOption,
        seed: Optional[int] = SeedOption,
        out: Optional[Path] = OutOption,
        workers: Optional[int] = WorkersOption,
        n: Optional[int] = NOption,
        eps: Optional[float] = EpsOption,
        samples: Optional[int] = SamplesOption,
    ) -> None:
        execute(build_config(kind, config, seed=seed, out=out, workers=workers, n=n, eps=eps, samples=samples))

    command.__doc__ = f"Run the {kind.value} experiment."
    return command


for _kind in ExperimentKind:
    app.command(name=_kind.value)(_make_command(_kind))


@app.command()
def run(
    config: Path = typer.Option(..., "--config", help="Flat key=value experiment file (must set kind)"),
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    workers: Optional[int] = WorkersOption,
    n: Optional[int] = NOption,
    eps: Optional[float] = EpsOption,
    samples: Optional[int] = SamplesOption,
) -> None:
    """Run the experiment described by a configuration file."""

    execute(build_config(None, config, seed=seed, out=out, workers=workers, n=n, eps=eps, samples=samples))


@app.command()
def settings() -> None:
    """List environment-backed settings and their current values."""

    for item in list_environment_settings():
        typer.echo(f"{item.env_name}={item.value} (default: {item.default})")


if __name__ == "__main__":  # pragma: no cover
    app()
