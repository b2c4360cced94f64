"""Householder reduction of self-adjoint matrices to real tridiagonal form."""

from __future__ import annotations

import numpy as np

from ..errors import ContractViolationError
from .base import TridiagonalMatrix

_SYMMETRY_TOLERANCE = 1e-10


def check_self_adjoint(matrix: np.ndarray) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ContractViolationError(f"expected a square matrix, got shape {matrix.shape}")
    scale = max(float(np.max(np.abs(matrix))) if matrix.size else 0.0, 1.0)
    asymmetry = float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0
    if asymmetry > _SYMMETRY_TOLERANCE * scale:
        raise ContractViolationError(
            f"matrix is not self-adjoint (max asymmetry {asymmetry:.3e})"
        )


def tridiagonalize(matrix: np.ndarray) -> TridiagonalMatrix:
    """Reduce ``matrix`` to a real symmetric tridiagonal ``T``.

    Every reflector acts on coordinates 2..n only, so the transform fixes the
    first coordinate vector and the first components of the eigenvectors of
    ``T`` equal those of ``matrix`` in modulus. Complex off-diagonals are
    rotated to their moduli by a diagonal unitary with unit (1, 1) entry.
    """

    matrix = np.asarray(getattr(matrix, "entries", matrix))
    check_self_adjoint(matrix)
    work = 0.5 * (matrix + matrix.conj().T)
    work = work.astype(complex) if np.iscomplexobj(work) else work.astype(float)
    n = work.shape[0]

    for k in range(n - 2):
        column = work[k + 1 :, k]
        norm = np.linalg.norm(column)
        if norm == 0.0:
            continue
        lead = column[0]
        phase = lead / abs(lead) if lead != 0 else 1.0
        alpha = -phase * norm
        reflector = column.copy()
        reflector[0] -= alpha
        reflector_norm = np.linalg.norm(reflector)
        if reflector_norm == 0.0:
            continue
        reflector /= reflector_norm
        # Apply P = I - 2 v v^* from both sides on the trailing block.
        block = work[k + 1 :, k:]
        block -= 2.0 * np.outer(reflector, reflector.conj() @ block)
        block = work[k:, k + 1 :]
        block -= 2.0 * np.outer(block @ reflector, reflector.conj())

    diagonal = np.real(np.diagonal(work)).astype(float)
    sub = np.diagonal(work, -1)
    # abs() absorbs the phases: D^* T D with D_11 = 1 has off-diagonals |T_{k+1,k}|.
    off_diagonal = np.abs(sub).astype(float) if np.iscomplexobj(sub) else np.abs(sub)
    return TridiagonalMatrix(diagonal=diagonal.copy(), off_diagonal=off_diagonal.copy())


__all__ = ["check_self_adjoint", "tridiagonalize"]
