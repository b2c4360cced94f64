"""Nystrom evaluation of the sine-kernel Fredholm determinant on L^2(-1, 1)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import LinAlgError, cho_factor, eigh

from ..config import get_settings
from ..logging import get_logger
from ..utils.seeding import make_rng
from .errors import ParameterError

LOGGER = get_logger(__name__)

MIN_NODES = 4


def sine_kernel(x: np.ndarray, y: np.ndarray, s: float) -> np.ndarray:
    """sin(s(x - y)) / (pi (x - y)), equal to s/pi on the diagonal."""

    return (s / np.pi) * np.sinc(s * (x - y) / np.pi)


@dataclass(frozen=True)
class KernelDiscretization:
    s: float
    nodes: np.ndarray
    weights: np.ndarray
    matrix: np.ndarray

    @property
    def size(self) -> int:
        return int(self.nodes.shape[0])


def discretize(s: float, nodes: int) -> KernelDiscretization:
    """Gauss-Legendre Nystrom matrix sqrt(w_i) K_s(x_i, x_j) sqrt(w_j)."""

    if s < 0.0 or not np.isfinite(s):
        raise ParameterError(f"kernel parameter s must be finite and nonnegative, got {s}")
    if nodes < MIN_NODES:
        raise ParameterError(f"at least {MIN_NODES} quadrature nodes are required, got {nodes}")
    x, w = leggauss(nodes)
    root = np.sqrt(w)
    full = root[:, None] * sine_kernel(x[:, None], x[None, :], s) * root[None, :]
    # Mirror the upper triangle so the matrix is symmetric bit for bit.
    matrix = np.triu(full) + np.triu(full, 1).T
    return KernelDiscretization(s=float(s), nodes=x, weights=w, matrix=matrix)


def _log_det_identity_minus(matrix: np.ndarray) -> float:
    system = np.eye(matrix.shape[0]) - matrix
    try:
        factor, _ = cho_factor(system, lower=True, check_finite=True)
    except LinAlgError:
        sign, logdet = np.linalg.slogdet(system)
        if sign <= 0.0:
            raise ParameterError("I - K is not positive definite; the discretisation is invalid")
        return float(logdet)
    return 2.0 * float(np.sum(np.log(np.diagonal(factor))))


def _raw_determinant(discretization: KernelDiscretization) -> float:
    return float(np.exp(_log_det_identity_minus(discretization.matrix)))


@dataclass(frozen=True)
class DeterminantResult:
    """det(I - M) together with its node-doubling check."""

    value: float
    nodes: int
    refined_value: float
    refinement_delta: float
    converged: bool

    def __float__(self) -> float:
        return self.value


def determinant(discretization: KernelDiscretization, tolerance: Optional[float] = None) -> DeterminantResult:
    """det(I - M) via Cholesky; the value is compared against twice as many nodes."""

    tolerance = get_settings().fredholm_tolerance if tolerance is None else tolerance
    value = _raw_determinant(discretization)
    refined = _raw_determinant(discretize(discretization.s, 2 * discretization.size))
    delta = abs(value - refined)
    converged = delta < tolerance
    if not converged:
        LOGGER.warning(
            "Fredholm determinant at s=%g changed by %.3e when doubling %d nodes",
            discretization.s,
            delta,
            discretization.size,
        )
    return DeterminantResult(value, discretization.size, refined, delta, converged)


def fredholm_determinant(
    s: float,
    nodes: Optional[int] = None,
    tolerance: Optional[float] = None,
    max_nodes: Optional[int] = None,
) -> DeterminantResult:
    """Double the node count until the refinement check passes or ``max_nodes`` is reached."""

    settings = get_settings()
    count = settings.fredholm_nodes if nodes is None else nodes
    limit = settings.fredholm_max_nodes if max_nodes is None else max_nodes
    tolerance = settings.fredholm_tolerance if tolerance is None else tolerance
    value = _raw_determinant(discretize(s, count))
    while True:
        refined = _raw_determinant(discretize(s, 2 * count))
        delta = abs(value - refined)
        if delta < tolerance:
            return DeterminantResult(value, count, refined, delta, True)
        if 2 * count > limit:
            LOGGER.warning("Fredholm determinant at s=%g not converged at %d nodes (delta %.3e)", s, count, delta)
            return DeterminantResult(value, count, refined, delta, False)
        count, value = 2 * count, refined


def eigenvalues(discretization: KernelDiscretization) -> np.ndarray:
    """Eigenvalues of M in descending order; round-off negatives are set to zero."""

    values = eigh(discretization.matrix, eigvals_only=True)
    return np.clip(values[::-1], 0.0, None)


@dataclass(frozen=True)
class ProductIdentity:
    determinant: float
    product: float
    difference: float


def product_identity(discretization: KernelDiscretization) -> ProductIdentity:
    """Compare det(I - M) with prod_k (1 - lambda_k)."""

    value = _raw_determinant(discretization)
    product = float(np.prod(1.0 - eigenvalues(discretization)))
    return ProductIdentity(value, product, abs(value - product))


def simulate_coin_flips(probabilities: np.ndarray, trials: int, seed: int) -> float:
    """Frequency with which no ball lands in the box.

    Ball k lands independently with probability ``probabilities[k]``.
    """

    if trials < 1:
        raise ParameterError("trials must be positive")
    p = np.asarray(probabilities, dtype=float)
    if np.any((p < 0.0) | (p > 1.0)):
        raise ParameterError("probabilities must lie in [0, 1]")
    p = p[p > 0.0]
    if p.size == 0:
        return 1.0
    rng = make_rng(seed)
    landed = rng.random((trials, p.size)) < p[None, :]
    return float(np.mean(~np.any(landed, axis=1)))


__all__ = [
    "DeterminantResult",
    "KernelDiscretization",
    "ProductIdentity",
    "determinant",
    "discretize",
    "eigenvalues",
    "fredholm_determinant",
    "product_identity",
    "simulate_coin_flips",
    "sine_kernel",
]
