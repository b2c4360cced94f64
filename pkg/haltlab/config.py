"""Global settings and experiment configuration."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .core.ensembles import EnsembleKind
from .core.errors import ConfigurationError


class Settings(BaseSettings):
    """Defaults shared by every run, read from HALTLAB_ variables and ``.env``."""

    output_dir: Path = Field(default_factory=lambda: Path("runs"))
    workers: int = 1
    default_seed: int = 0
    log_level: str = "INFO"
    ql_max_sweeps: int = 60
    toda_scan_start: float = 1e-3
    toda_scan_factor: float = 1.25
    toda_scan_cap: float = 1e6
    toda_bisection_rtol: float = 1e-10
    fredholm_nodes: int = 60
    fredholm_tolerance: float = 1e-10
    fredholm_max_nodes: int = 640
    ks_threshold: float = 0.1
    edge_ks_threshold: float = 0.08
    scaling_margin: float = 0.1
    histogram_bins: str = "fd"

    model_config = SettingsConfigDict(
        env_prefix="HALTLAB_",
        env_file=".env",
        case_sensitive=False,
    )


_settings: Optional[Settings] = None

_ENV_PREFIX: str = (dict(Settings.model_config or {}).get("env_prefix") or "").upper()


@dataclass
class EnvironmentSetting:
    """One settings field with its HALTLAB_ variable name, value and default."""

    field: str
    env_name: str
    value: Any
    default: Any


def _field_default(field_info) -> Any:
    if field_info.default_factory is not None:  # type: ignore[truthy-function]
        return field_info.default_factory()
    return field_info.default


def list_environment_settings(settings: Optional[Settings] = None) -> Iterable[EnvironmentSetting]:
    """Yield every settings field, as printed by ``haltlab settings``."""

    settings = settings or get_settings()
    for name, field in Settings.model_fields.items():
        yield EnvironmentSetting(
            field=name,
            env_name=f"{_ENV_PREFIX}{name}".upper(),
            value=getattr(settings, name),
            default=_field_default(field),
        )


def get_settings() -> Settings:
    """Settings are read once per process and cached."""

    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


class ExperimentKind(str, Enum):
    TODA_T1 = "toda-t1"
    QR_HALTING = "qr-halting"
    CG_HALTING = "cg-halting"
    UNIVERSALITY_COMPARE = "universality-compare"
    THEOREM1 = "theorem1"
    CONDITIONS = "conditions"
    LATTICE_SHOCK = "lattice-shock"
    LATTICE_DRIVEN = "lattice-driven"
    FREDHOLM_GRID = "fredholm-grid"


_LIST_FIELDS = {"n_grid", "p_grid", "s_grid", "gamma_grid"}

# Fields that do not influence results and therefore stay out of the hash.
_UNHASHED_FIELDS = {"output_dir", "workers"}


class ExperimentConfig(BaseModel):
    """One experiment, fully reproducible from its serialised form and seed."""

    model_config = ConfigDict(extra="forbid")

    kind: ExperimentKind
    ensemble: EnsembleKind = EnsembleKind.GOE
    compare_ensemble: Optional[EnsembleKind] = None
    algorithm: str = "toda"
    compare_algorithm: Optional[str] = None
    n: int = Field(default=100, ge=1)
    n_grid: List[int] = Field(default_factory=list)
    epsilon: float = Field(default=1e-6, gt=0.0, lt=1.0)
    samples: int = Field(default=1000, ge=1)
    seed: int = Field(default_factory=lambda: get_settings().default_seed)
    output_dir: Optional[Path] = None
    workers: int = Field(default_factory=lambda: get_settings().workers, ge=1)
    k_max: int = Field(default=20_000, ge=1)
    m_ratio: float = Field(default=2.0, ge=1.0)
    p_grid: List[float] = Field(default_factory=lambda: [0.3, 0.2, 0.1, 0.05, 0.02])
    s: float = Field(default=0.2, gt=0.0)
    c_v: float = Field(default=1.0, gt=0.0)
    b_v: float = 2.0
    a: float = 2.0
    gamma: float = Field(default=3.0, gt=0.0)
    h_amplitude: float = 0.1
    gamma_grid: List[float] = Field(default_factory=list)
    force: str = "exp"
    force_delta: float = 0.0
    lattice_size: int = Field(default=300, ge=10)
    dt: float = Field(default=0.01, gt=0.0)
    t_end: float = Field(default=40.0, gt=0.0)
    window: float = Field(default=20.0, gt=0.0)
    watch_site: int = Field(default=10, ge=1)
    snapshot_stride: int = Field(default=50, ge=1)
    s_grid: List[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0, 4.0, 8.0])
    fredholm_nodes: Optional[int] = None
    ks_threshold: Optional[float] = None

    @field_validator("ensemble", "compare_ensemble", mode="before")
    @classmethod
    def _parse_ensemble(cls, value: Any) -> Any:
        if isinstance(value, str):
            return EnsembleKind.parse(value)
        return value

    @field_validator("n_grid", "p_grid", "s_grid", "gamma_grid", mode="before")
    @classmethod
    def _split_lists(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        return value

    @field_validator("algorithm", "compare_algorithm")
    @classmethod
    def _known_algorithm(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return None
        normalized = value.strip().lower()
        if normalized not in {"toda", "qr"}:
            raise ValueError("algorithm must be 'toda' or 'qr'")
        return normalized

    def canonical_lines(self) -> List[str]:
        """Return the sorted ``key=value`` lines that define this experiment."""

        payload = self.model_dump(mode="json", exclude=_UNHASHED_FIELDS)
        lines = []
        for key in sorted(payload):
            value = payload[key]
            if key in _LIST_FIELDS:
                rendered = ",".join(repr(item) for item in value)
            elif value is None:
                rendered = ""
            else:
                rendered = json.dumps(value) if not isinstance(value, str) else value
            lines.append(f"{key}={rendered}")
        return lines

    def config_hash(self) -> str:
        digest = hashlib.sha256("\n".join(self.canonical_lines()).encode("utf-8"))
        return digest.hexdigest()[:16]


def parse_config_text(text: str) -> Dict[str, str]:
    """Parse flat ``key=value`` text into a dictionary of raw strings."""

    values: Dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigurationError(f"line {number}: expected key=value, got {stripped!r}")
        key, value = stripped.split("=", 1)
        key = key.strip().replace("-", "_")
        if not key:
            raise ConfigurationError(f"line {number}: empty key")
        values[key] = value.strip()
    return values


def build_experiment_config(
    raw: Mapping[str, Any], overrides: Optional[Mapping[str, Any]] = None
) -> ExperimentConfig:
    """Validate raw values (file contents plus CLI overrides) into a config."""

    merged: Dict[str, Any] = {key: value for key, value in raw.items() if value != ""}
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    try:
        return ExperimentConfig(**merged)
    except ValidationError as exc:
        raise ConfigurationError(str(exc)) from exc


def load_experiment_config(
    path: Optional[Path], overrides: Optional[Mapping[str, Any]] = None
) -> ExperimentConfig:
    raw: Dict[str, str] = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"configuration file not found: {path}")
        raw = parse_config_text(path.read_text())
    return build_experiment_config(raw, overrides)


__all__ = [
    "EnvironmentSetting",
    "ExperimentConfig",
    "ExperimentKind",
    "Settings",
    "build_experiment_config",
    "get_settings",
    "list_environment_settings",
    "load_experiment_config",
    "parse_config_text",
]
