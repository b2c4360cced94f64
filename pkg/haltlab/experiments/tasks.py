"""Per-sample tasks executed by the sample orchestrator.

Each task is a module-level function of the sample index (bound with
``functools.partial``) so it can be shipped to worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.ensembles import EnsembleSpec, stream_sample
from ..core.errors import ConvergenceError, DegenerateSampleError, NonHaltingError
from ..core.iterative import cg_halting, qr_halting, wishart_system
from ..core.spectral import SpectralData, spectral_data
from ..core.toda import halting_time_t1
from ..utils.seeding import derive_seed


@dataclass(frozen=True)
class HaltingSample:
    index: int
    halting_time: float
    error: float
    top_gap: float
    halted: bool = True
    skipped: Optional[str] = None


def toda_sample(spec: EnsembleSpec, master_seed: int, epsilon: float, index: int) -> HaltingSample:
    try:
        spectral = spectral_data(stream_sample(spec, master_seed, index))
        clock = halting_time_t1(spectral, epsilon)
    except (ConvergenceError, NonHaltingError, DegenerateSampleError) as exc:
        return HaltingSample(index, float("nan"), float("nan"), float("nan"), False, str(exc))
    gap = spectral.top_gap if spectral.n > 1 else float("inf")
    return HaltingSample(index, clock.t1, clock.eigenvalue_error, gap)


def qr_sample(spec: EnsembleSpec, master_seed: int, epsilon: float, k_max: int, index: int) -> HaltingSample:
    matrix = stream_sample(spec, master_seed, index)
    run = qr_halting(matrix, epsilon, k_max)
    eigenvalues = np.linalg.eigvalsh(matrix.entries)
    dominant = float(eigenvalues[int(np.argmax(np.abs(eigenvalues)))])
    top_gap = float(eigenvalues[-1] - eigenvalues[-2]) if eigenvalues.size > 1 else float("inf")
    error = abs(float(np.real(run.final_diagonal[0])) - dominant)
    return HaltingSample(index, float(run.iterations), error, top_gap, run.halted)


@dataclass(frozen=True)
class CgSample:
    index: int
    iterations: int
    residual: float
    halted: bool


def cg_sample(n: int, m: int, master_seed: int, epsilon: float, k_max: int, index: int) -> CgSample:
    a, b = wishart_system(n, m, derive_seed(master_seed, index))
    run = cg_halting(a, b, epsilon, k_max)
    return CgSample(index, run.iterations, run.final_residual, run.halted)


def spectral_sample(spec: EnsembleSpec, master_seed: int, index: int) -> SpectralData:
    return spectral_data(stream_sample(spec, master_seed, index))


__all__ = ["CgSample", "HaltingSample", "cg_sample", "qr_sample", "spectral_sample", "toda_sample"]
