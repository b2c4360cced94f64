"""Implicit-shift QL eigensolver for symmetric tridiagonal matrices.

Only the first row of the accumulated rotation is carried through the
sweeps: it holds the first components of every normalised eigenvector, which
together with the eigenvalues is all the Toda halting analysis needs.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
from numba import njit

from ...config import get_settings
from ...logging import get_logger
from ..errors import ConvergenceError
from .base import SpectralData, TridiagonalMatrix

LOGGER = get_logger(__name__)

_EPS = np.finfo(float).eps


@njit(cache=True)
def _implicit_ql(d, e, z, max_sweeps, eps):  # pragma: no cover - compiled
    """Diagonalise (d, e) in place, rotating the rows of ``z`` alongside.

    ``e`` has length n with e[n-1] unused. Returns -1 on success or the index
    of the eigenvalue whose sweep count exceeded ``max_sweeps``.
    """

    n = d.shape[0]
    rows = z.shape[0]
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if sweeps == max_sweeps:
                return l
            sweeps += 1
            # Wilkinson-type shift from the leading 2x2 block.
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(rows):
                    f = z[k, i + 1]
                    z[k, i + 1] = s * z[k, i] + c * f
                    z[k, i] = c * z[k, i] - s * f
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1


def _diagonalize(
    tridiagonal: TridiagonalMatrix, rows: np.ndarray, max_sweeps: Optional[int]
) -> tuple[np.ndarray, np.ndarray]:
    n = tridiagonal.n
    d = np.array(tridiagonal.diagonal, dtype=np.float64)
    e = np.zeros(n, dtype=np.float64)
    if n > 1:
        e[: n - 1] = tridiagonal.off_diagonal
    z = np.ascontiguousarray(rows, dtype=np.float64)
    cap = max_sweeps if max_sweeps is not None else get_settings().ql_max_sweeps
    status = _implicit_ql(d, e, z, int(cap), float(_EPS))
    if status >= 0:
        raise ConvergenceError(
            f"implicit QL did not converge for eigenvalue index {status} within {cap} sweeps",
            index=int(status),
        )
    order = np.argsort(d, kind="stable")
    return d[order], z[:, order]


def eigen_full(tridiagonal: TridiagonalMatrix, max_sweeps: Optional[int] = None) -> SpectralData:
    """Return ascending eigenvalues and the moduli of eigenvector first components."""

    first_row = np.zeros((1, tridiagonal.n))
    first_row[0, 0] = 1.0
    eigenvalues, rotated = _diagonalize(tridiagonal, first_row, max_sweeps)
    return SpectralData(eigenvalues=eigenvalues, first_components=np.abs(rotated[0]))


def eigenvectors_by_inverse_iteration(
    tridiagonal: TridiagonalMatrix, eigenvalues: np.ndarray, iterations: int = 3
) -> np.ndarray:
    """Recompute full eigenvectors by shifted inverse iteration (test oracle).

    Column j of the result is the unit eigenvector for ``eigenvalues[j]``.
    """

    dense = tridiagonal.to_dense()
    n = tridiagonal.n
    scale = max(float(np.max(np.abs(dense))), 1.0)
    vectors = np.empty((n, n))
    start = np.ones(n) / np.sqrt(n)
    for j, value in enumerate(eigenvalues):
        shifted = dense - (value + 1e3 * _EPS * scale) * np.eye(n)
        vector = start.copy()
        for _ in range(iterations):
            vector = np.linalg.solve(shifted, vector)
            vector /= np.linalg.norm(vector)
        vectors[:, j] = vector
    return vectors


__all__ = ["eigen_full", "eigenvectors_by_inverse_iteration"]
