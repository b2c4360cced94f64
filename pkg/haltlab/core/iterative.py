"""Discrete eigenvalue and linear-solver iterations run on random data."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..logging import get_logger
from ..utils.seeding import make_rng
from .errors import ParameterError
from .spectral.tridiagonal import check_self_adjoint

LOGGER = get_logger(__name__)


@dataclass
class QrRun:
    """Outcome of an unshifted QR iteration with a first-row stopping rule."""

    iterations: int
    residuals: List[float] = field(default_factory=list)
    final_diagonal: np.ndarray = field(default_factory=lambda: np.zeros(0))
    halted: bool = True
    final_matrix: Optional[np.ndarray] = None

    @property
    def final_residual(self) -> float:
        return self.residuals[-1] if self.residuals else float("nan")


@dataclass
class CgRun:
    """Outcome of conjugate gradient stopped on the true residual."""

    iterations: int
    residuals: List[float] = field(default_factory=list)
    solution: np.ndarray = field(default_factory=lambda: np.zeros(0))
    halted: bool = True
    iterates: List[np.ndarray] = field(default_factory=list)

    @property
    def final_residual(self) -> float:
        return self.residuals[-1] if self.residuals else float("nan")


def _check_epsilon(epsilon: float, k_max: int) -> None:
    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    if k_max < 1:
        raise ParameterError("k_max must be at least 1")


def qr_step(matrix: np.ndarray) -> np.ndarray:
    """One unshifted QR step X -> RQ with diag(R) >= 0."""

    matrix = np.asarray(getattr(matrix, "entries", matrix))
    check_self_adjoint(matrix)
    q, r = np.linalg.qr(matrix)
    diagonal = np.diagonal(r)
    magnitude = np.abs(diagonal)
    phases = np.where(magnitude > 0.0, diagonal / np.where(magnitude > 0.0, magnitude, 1.0), 1.0)
    # X = (Q D)(D^* R) with D = diag(phases) makes the diagonal of R nonnegative.
    r = phases.conj()[:, None] * r
    q = q * phases[None, :]
    step = r @ q
    return 0.5 * (step + step.conj().T)


def _first_row_residual(matrix: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.abs(matrix[0, 1:]) ** 2)))


def qr_halting(matrix: np.ndarray, epsilon: float, k_max: int) -> QrRun:
    """Iterate ``qr_step`` until the first-row residual drops below ``epsilon``.

    A run that reaches ``k_max`` is returned with ``halted=False``.
    """

    _check_epsilon(epsilon, k_max)
    current = np.asarray(getattr(matrix, "entries", matrix))
    check_self_adjoint(current)
    residuals = [_first_row_residual(current)]
    k = 0
    while residuals[-1] >= epsilon:
        if k == k_max:
            LOGGER.debug("QR iteration did not halt within %d steps", k_max)
            return QrRun(k, residuals, np.real(np.diagonal(current)).copy(), False, current)
        current = qr_step(current)
        k += 1
        residuals.append(_first_row_residual(current))
    return QrRun(k, residuals, np.real(np.diagonal(current)).copy(), True, current)


def wishart_system(n: int, m: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Return A = W W^T / m and a unit right-hand side b."""

    if n < 1:
        raise ParameterError("n must be positive")
    if m < n:
        raise ParameterError(f"m must be at least n for a nonsingular Gram matrix (n={n}, m={m})")
    rng = make_rng(seed)
    w = rng.standard_normal((n, m))
    a = (w @ w.T) / m
    a = 0.5 * (a + a.T)
    b = rng.standard_normal(n)
    b /= np.linalg.norm(b)
    return a, b


def cg_halting(
    a: np.ndarray,
    b: np.ndarray,
    epsilon: float,
    k_max: int,
    *,
    keep_iterates: bool = False,
) -> CgRun:
    """Conjugate gradient from x_0 = 0, halting on ||b - A x_k|| < epsilon."""

    _check_epsilon(epsilon, k_max)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] != b.shape[0]:
        raise ParameterError("A must be square and match the length of b")

    x = np.zeros_like(b)
    residual = b.copy()
    direction = residual.copy()
    rho = float(residual @ residual)
    norms = [float(np.linalg.norm(b - a @ x))]
    iterates = [x.copy()] if keep_iterates else []
    k = 0
    while norms[-1] >= epsilon:
        if k == k_max:
            return CgRun(k, norms, x, False, iterates)
        product = a @ direction
        curvature = float(direction @ product)
        if curvature <= 0.0:
            raise ParameterError("A is not positive definite along the search direction")
        alpha = rho / curvature
        x = x + alpha * direction
        residual = residual - alpha * product
        k += 1
        norms.append(float(np.linalg.norm(b - a @ x)))
        if keep_iterates:
            iterates.append(x.copy())
        rho_next = float(residual @ residual)
        if rho_next == 0.0:
            continue
        direction = residual + (rho_next / rho) * direction
        rho = rho_next
    return CgRun(k, norms, x, True, iterates)


__all__ = ["CgRun", "QrRun", "cg_halting", "qr_halting", "qr_step", "wishart_system"]
