"""Flat-file storage for experiment outputs."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

from pydantic import BaseModel

from ..utils.histogram import Histogram
from .models import RunSummary


def _render(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    if isinstance(value, (list, tuple)):
        return ";".join(_render(item) for item in value)
    return str(value)


class ResultStore:
    """Writes CSV tables and a JSON summary under one run directory.

    Every file starts with a ``# haltlab config=<hash> seed=<seed>`` line so
    each artefact can be traced back to the configuration that produced it.
    """

    def __init__(self, path: Path, config_hash: str, seed: int) -> None:
        self.path = Path(path)
        self.config_hash = config_hash
        self.seed = seed
        self.written: List[Path] = []

    def initialize(self) -> None:
        self.path.mkdir(parents=True, exist_ok=True)

    @property
    def header(self) -> str:
        return f"# haltlab config={self.config_hash} seed={self.seed}"

    def _target(self, name: str) -> Path:
        target = self.path / name
        target.parent.mkdir(parents=True, exist_ok=True)
        if target not in self.written:
            self.written.append(target)
        return target

    def write_rows(self, name: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        target = self._target(name)
        with target.open("w", newline="") as handle:
            handle.write(self.header + "\n")
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(list(columns))
            for row in rows:
                writer.writerow([_render(value) for value in row])
        return target

    def write_records(self, name: str, records: Sequence[BaseModel], columns: Optional[Sequence[str]] = None) -> Path:
        if columns is None:
            columns = list(type(records[0]).model_fields) if records else []
        rows = ([getattr(record, column) for column in columns] for record in records)
        return self.write_rows(name, columns, rows)

    def write_histogram(self, name: str, histogram: Histogram) -> Path:
        return self.write_rows(name, ["bin_center", "count", "density"], histogram.rows())

    def write_samples(self, name: str, column: str, values: Iterable[float]) -> Path:
        return self.write_rows(name, [column], ([float(value)] for value in values))

    def write_summary(self, summary: RunSummary, name: str = "summary.json") -> Path:
        target = self._target(name)
        summary.files = sorted(str(path.relative_to(self.path)) for path in self.written if path != target)
        payload = summary.model_dump(mode="json")
        payload["passed"] = summary.passed
        target.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return target

    def write_config(self, lines: Sequence[str], name: str = "config.txt") -> Path:
        target = self._target(name)
        target.write_text(self.header + "\n" + "\n".join(lines) + "\n")
        return target

    def read_rows(self, name: str) -> List[List[str]]:
        with (self.path / name).open(newline="") as handle:
            lines = [line for line in handle if not line.startswith("#")]
        return list(csv.reader(lines))

    def fetch_summary(self, name: str = "summary.json") -> Optional[RunSummary]:
        target = self.path / name
        if not target.exists():
            return None
        payload = json.loads(target.read_text())
        payload.pop("passed", None)
        return RunSummary(**payload)


__all__ = ["ResultStore"]
