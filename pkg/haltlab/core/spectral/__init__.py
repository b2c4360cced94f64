"""Symmetric eigensolver producing eigenvalues and first eigenvector components."""

from .base import GapStatistics, SpectralData, TridiagonalMatrix
from .eigensolver import eigen_full, eigenvectors_by_inverse_iteration
from .gaps import edge_scale, gap_stats, semicircle_cdf, semicircle_quantile, semicircle_quantiles
from .tridiagonal import tridiagonalize


def spectral_data(matrix) -> SpectralData:
    """Tridiagonalise and diagonalise a self-adjoint matrix in one call."""

    return eigen_full(tridiagonalize(matrix))


__all__ = [
    "GapStatistics",
    "SpectralData",
    "TridiagonalMatrix",
    "edge_scale",
    "eigen_full",
    "eigenvectors_by_inverse_iteration",
    "gap_stats",
    "semicircle_cdf",
    "semicircle_quantile",
    "semicircle_quantiles",
    "spectral_data",
    "tridiagonalize",
]
