"""Wigner-class random matrix ensembles with semicircle support [-2, 2].

Normalisation: off-diagonal entries have mean 0 and variance 1/n (complex
entries split the variance evenly between real and imaginary parts), GOE
diagonal entries have variance 2/n, and Bernoulli entries are +-1/sqrt(n)
(complex off-diagonal: (+-1 +-i)/sqrt(2n)). The top edge of the limiting
spectrum is therefore b_v = 2 for every ensemble.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterator, List

import numpy as np

from ..utils.seeding import derive_seed, make_rng
from .errors import ParameterError

SEMICIRCLE_EDGE = 2.0


class EnsembleKind(str, Enum):
    GOE = "GOE"
    GUE = "GUE"
    BERNOULLI_REAL = "BernoulliReal"
    BERNOULLI_COMPLEX = "BernoulliComplex"
    DIAGONAL = "Diagonal"
    PLANTED = "Planted"

    @property
    def beta(self) -> int:
        return 2 if self in (EnsembleKind.GUE, EnsembleKind.BERNOULLI_COMPLEX) else 1

    @property
    def is_debug(self) -> bool:
        """Diagonal and planted streams start in an eigenbasis and break genericity."""

        return self in (EnsembleKind.DIAGONAL, EnsembleKind.PLANTED)

    @classmethod
    def parse(cls, value: str) -> "EnsembleKind":
        normalized = value.strip().lower().replace("_", "").replace("-", "")
        for member in cls:
            if member.value.lower() == normalized or member.name.lower().replace("_", "") == normalized:
                return member
        raise ParameterError(f"Unknown ensemble kind: {value}")


@dataclass(frozen=True)
class EnsembleSpec:
    """Parametrised description of a random matrix distribution."""

    kind: EnsembleKind
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ParameterError(f"matrix dimension must be a positive integer, got {self.n!r}")

    @property
    def beta(self) -> int:
        return self.kind.beta

    @property
    def is_complex(self) -> bool:
        return self.beta == 2


@dataclass(frozen=True)
class RandomMatrix:
    """Self-adjoint sample together with its symmetry class."""

    entries: np.ndarray
    beta: int

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])

    def is_self_adjoint(self) -> bool:
        return bool(np.array_equal(self.entries, self.entries.conj().T))


def _mirror(upper: np.ndarray) -> np.ndarray:
    """Build an exactly self-adjoint matrix from the upper triangle of ``upper``."""

    strict = np.triu(upper, 1)
    matrix = strict + strict.conj().T
    matrix[np.diag_indices_from(matrix)] = np.real(np.diagonal(upper))
    return matrix


def _sample_entries(kind: EnsembleKind, n: int, rng: np.random.Generator) -> np.ndarray:
    if kind is EnsembleKind.GOE:
        gaussian = rng.standard_normal((n, n))
        return (gaussian + gaussian.T) / np.sqrt(2.0 * n)
    if kind is EnsembleKind.GUE:
        scale = 1.0 / np.sqrt(2.0 * n)
        upper = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) * scale
        upper[np.diag_indices(n)] = rng.standard_normal(n) / np.sqrt(n)
        return _mirror(upper)
    if kind is EnsembleKind.BERNOULLI_REAL:
        signs = rng.choice(np.array([-1.0, 1.0]), size=(n, n))
        return _mirror(signs / np.sqrt(n))
    if kind is EnsembleKind.BERNOULLI_COMPLEX:
        values = np.array([-1.0, 1.0])
        upper = (rng.choice(values, size=(n, n)) + 1j * rng.choice(values, size=(n, n))) / np.sqrt(2.0 * n)
        # Hermitian diagonals are real: they take the values +-1/sqrt(n).
        upper[np.diag_indices(n)] = rng.choice(values, size=n) / np.sqrt(n)
        return _mirror(upper)
    if kind is EnsembleKind.DIAGONAL:
        return np.diag(rng.standard_normal(n) / np.sqrt(n))
    if kind is EnsembleKind.PLANTED:
        planted = np.arange(1, n + 1, dtype=float)
        planted[-1] += 1.0
        return np.diag(planted)
    raise ParameterError(f"Unsupported ensemble kind: {kind}")


def sample(spec: EnsembleSpec, seed: int) -> RandomMatrix:
    """Draw one matrix from ``spec`` using a generator seeded by ``seed``."""

    entries = _sample_entries(spec.kind, spec.n, make_rng(seed))
    if spec.is_complex:
        entries = entries.astype(complex)
    return RandomMatrix(entries=entries, beta=spec.beta)


def stream_sample(spec: EnsembleSpec, master_seed: int, index: int) -> RandomMatrix:
    """Return matrix ``index`` of the stream defined by ``master_seed``."""

    return sample(spec, derive_seed(master_seed, index))


def reseedable_stream(spec: EnsembleSpec, master_seed: int, count: int) -> Iterator[RandomMatrix]:
    """Yield ``count`` matrices; matrix k depends only on (master_seed, k)."""

    if count < 1:
        raise ParameterError("stream count must be at least 1")
    for index in range(count):
        yield stream_sample(spec, master_seed, index)


def export_csv(matrix: RandomMatrix, path: Path) -> Path:
    """Write ``matrix`` row-major; complex rows interleave real and imaginary parts."""

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    entries = matrix.entries
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        for row in entries:
            if np.iscomplexobj(entries):
                cells: List[str] = []
                for value in row:
                    cells.extend([repr(float(value.real)), repr(float(value.imag))])
            else:
                cells = [repr(float(value)) for value in row]
            writer.writerow(cells)
    return path


__all__ = [
    "EnsembleKind",
    "EnsembleSpec",
    "RandomMatrix",
    "SEMICIRCLE_EDGE",
    "export_csv",
    "reseedable_stream",
    "sample",
    "stream_sample",
]
