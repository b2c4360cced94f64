"""Spectral data types shared by the eigensolver and its consumers."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Real symmetric tridiagonal matrix stored by its two diagonals."""

    diagonal: np.ndarray
    off_diagonal: np.ndarray

    def __post_init__(self) -> None:
        if self.off_diagonal.shape[0] != max(self.diagonal.shape[0] - 1, 0):
            raise ValueError("off-diagonal must have length n - 1")

    @property
    def n(self) -> int:
        return int(self.diagonal.shape[0])

    def to_dense(self) -> np.ndarray:
        return (
            np.diag(self.diagonal)
            + np.diag(self.off_diagonal, 1)
            + np.diag(self.off_diagonal, -1)
        )

    @classmethod
    def from_dense(cls, matrix: np.ndarray) -> "TridiagonalMatrix":
        matrix = np.asarray(matrix, dtype=float)
        return cls(
            diagonal=np.diagonal(matrix).copy(),
            off_diagonal=np.diagonal(matrix, -1).copy(),
        )


@dataclass(frozen=True)
class SpectralData:
    """Ascending eigenvalues and moduli of the eigenvectors' first components.

    This pair is the whole input of the closed-form Toda solution.
    """

    eigenvalues: np.ndarray
    first_components: np.ndarray

    @property
    def n(self) -> int:
        return int(self.eigenvalues.shape[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def top_gap(self) -> float:
        return float(self.eigenvalues[-1] - self.eigenvalues[-2])

    def normalization_error(self) -> float:
        return abs(float(np.sum(self.first_components**2)) - 1.0)

    def to_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["lambda", "beta"])
            for value, weight in zip(self.eigenvalues, self.first_components):
                writer.writerow([repr(float(value)), repr(float(weight))])
        return path

    @classmethod
    def from_csv(cls, path: Path) -> "SpectralData":
        with Path(path).open(newline="") as handle:
            rows = list(csv.reader(handle))[1:]
        data = np.array([[float(a), float(b)] for a, b in rows])
        return cls(eigenvalues=data[:, 0], first_components=data[:, 1])


@dataclass(frozen=True)
class GapStatistics:
    """Top gaps and edge-scaled distances of the three largest eigenvalues."""

    top_gap: float
    second_gap: float
    scaled_edge_triple: tuple[float, float, float]


__all__ = ["GapStatistics", "SpectralData", "TridiagonalMatrix"]
