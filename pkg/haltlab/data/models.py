"""Data models used by haltlab."""

from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class HaltingRecord(BaseModel):
    index: int
    ensemble: str
    algorithm: str
    n: int
    epsilon: float
    halting_time: float
    error: float
    halted: bool = True


class TheoremRecord(BaseModel):
    index: int
    t1: float
    top_gap: float
    scaled_t1: float
    scaled_gap: float
    corollary_error: float


class CgRecord(BaseModel):
    index: int
    n: int
    m: int
    epsilon: float
    iterations: int
    residual: float
    halted: bool = True


class FredholmRecord(BaseModel):
    s: float
    determinant: float
    nodes: int
    refinement_delta: float
    converged: bool
    product: float
    coin_flip_estimate: Optional[float] = None
    eigenvalues: List[float] = Field(default_factory=list)


class LatticeSweepRecord(BaseModel):
    gamma: float
    a: float
    periodicity_residual: float
    decay_slope: float
    far_displacement: float


class CheckResult(BaseModel):
    """Named pass/fail acceptance check with the measured value."""

    name: str
    passed: bool
    value: Optional[float] = None
    threshold: Optional[float] = None
    detail: str = ""


class RunSummary(BaseModel):
    kind: str
    config_hash: str
    seed: int
    samples: int = 0
    skipped: int = 0
    metrics: Dict[str, float] = Field(default_factory=dict)
    checks: List[CheckResult] = Field(default_factory=list)
    files: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


__all__ = [
    "CgRecord",
    "CheckResult",
    "FredholmRecord",
    "HaltingRecord",
    "LatticeSweepRecord",
    "RunSummary",
    "TheoremRecord",
]
