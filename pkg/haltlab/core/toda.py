"""The Toda eigenvalue algorithm.

The flow dX/dt = [X, B(X)], B(X) = X_- - X_-^*, is evaluated in closed form
from the spectral data of X(0): the first eigenvector components evolve as
|u_1j(t)| proportional to beta_j e^{lambda_j t}, so the first row of X(t) and
the off-diagonal energy E(t) need no integration. The RK4 integrator below is
kept as an independent oracle for that formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from ..config import get_settings
from ..logging import get_logger
from .errors import IntegrationError, NonHaltingError, ParameterError
from .spectral import SpectralData

LOGGER = get_logger(__name__)


@dataclass(frozen=True)
class FirstRowState:
    """Weights |u_1j(t)|^2 together with X_11(t) and E(t) at one time."""

    t: float
    weights: np.ndarray
    x11: float
    deficit: float
    energy: float


@dataclass(frozen=True)
class TodaClock:
    """Halting time T^(1) for accuracy ``epsilon`` and the first-row state there."""

    spectral: SpectralData
    epsilon: float
    t1: float
    x11_at_t1: float
    energy_at_t1: float

    @property
    def eigenvalue_error(self) -> float:
        """|lambda_max - X_11(T^(1))|."""

        return abs(self.spectral.lambda_max - self.x11_at_t1)


def _check_time(t: float) -> None:
    if t < 0.0 or not np.isfinite(t):
        raise ParameterError(f"time must be finite and nonnegative, got {t}")


def first_row_state(spectral: SpectralData, t: float) -> FirstRowState:
    """Evaluate the Moser solution at time ``t`` in log-domain.

    Exponents 2(lambda_j t + log beta_j) are shifted by their maximum before
    exponentiation, so the weights stay finite for any t and n. X_11 is
    carried as lambda_max minus a nonnegative deficit to avoid cancellation
    once the weight concentrates on the top eigenvalue.
    """

    _check_time(t)
    lam = spectral.eigenvalues
    with np.errstate(divide="ignore"):
        exponents = 2.0 * (lam * t + np.log(spectral.first_components))
    exponents = exponents - np.max(exponents)
    weights = np.exp(exponents)
    weights /= np.sum(weights)

    top = lam[-1]
    deficit = float(np.sum((top - lam) * weights))
    offsets = (lam - top) + deficit
    energy = float(np.sum(offsets * offsets * weights))
    return FirstRowState(t=float(t), weights=weights, x11=float(top - deficit), deficit=deficit, energy=energy)


def energy(spectral: SpectralData, t: float) -> float:
    """E(t) = sum_j (lambda_j - X_11(t))^2 |u_1j(t)|^2."""

    return first_row_state(spectral, t).energy


def x11(spectral: SpectralData, t: float) -> float:
    """X_11(t) = sum_{i=1}^{n} lambda_i |u_1i(t)|^2."""

    return first_row_state(spectral, t).x11


def halting_time_t1(
    spectral: SpectralData,
    epsilon: float,
    *,
    scan_start: Optional[float] = None,
    scan_factor: Optional[float] = None,
    scan_cap: Optional[float] = None,
    rtol: Optional[float] = None,
) -> TodaClock:
    """Return the first time E(t) reaches epsilon^2.

    A geometric forward scan brackets the first down-crossing and bisection
    refines it. E need not be monotone, so no global root finder is used.
    """

    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    settings = get_settings()
    start = scan_start if scan_start is not None else settings.toda_scan_start
    factor = scan_factor if scan_factor is not None else settings.toda_scan_factor
    cap = scan_cap if scan_cap is not None else settings.toda_scan_cap
    tolerance = rtol if rtol is not None else settings.toda_bisection_rtol
    target = epsilon * epsilon

    initial = first_row_state(spectral, 0.0)
    if initial.energy <= target:
        return TodaClock(spectral, epsilon, 0.0, initial.x11, initial.energy)

    lower, upper = 0.0, float(start)
    while energy(spectral, upper) > target:
        lower = upper
        upper *= factor
        if upper > cap:
            raise NonHaltingError(
                f"E(t) stayed above epsilon^2 up to t = {cap:g}; spectrum is likely degenerate"
            )

    t1 = float(
        bisect(
            lambda t: energy(spectral, t) / target - 1.0,
            lower,
            upper,
            xtol=1e-300,
            rtol=max(tolerance, 4.0 * np.finfo(float).eps),
            maxiter=2000,
        )
    )
    state = first_row_state(spectral, t1)
    LOGGER.debug("T1=%.6g for n=%d, epsilon=%.3g", t1, spectral.n, epsilon)
    return TodaClock(spectral, epsilon, t1, state.x11, state.energy)


def toda_vector_field(matrix: np.ndarray) -> np.ndarray:
    """[X, B(X)] with B(X) = X_- - X_-^*."""

    lower = np.tril(matrix, -1)
    skew = lower - lower.conj().T
    return matrix @ skew - skew @ matrix


@dataclass
class TodaTrajectory:
    times: np.ndarray
    states: List[np.ndarray] = field(default_factory=list)

    def first_row_energy(self) -> np.ndarray:
        return np.array([float(np.sum(np.abs(state[0, 1:]) ** 2)) for state in self.states])


def ode_oracle(
    matrix: np.ndarray,
    t_end: float,
    dt: float,
    sample_times: Optional[Sequence[float]] = None,
) -> TodaTrajectory:
    """Integrate the Toda matrix ODE with classical RK4.

    The trajectory is recorded at ``sample_times`` (every step by default);
    each segment between samples uses the largest step not exceeding ``dt``
    that lands on the sample exactly.
    """

    if dt <= 0.0:
        raise ParameterError("dt must be positive")
    if t_end < 0.0:
        raise ParameterError("t_end must be nonnegative")
    initial = np.asarray(getattr(matrix, "entries", matrix))
    state = initial.astype(complex if np.iscomplexobj(initial) else float)
    if sample_times is None:
        steps = int(np.ceil(t_end / dt)) if t_end > 0 else 0
        targets = np.linspace(0.0, t_end, steps + 1)
    else:
        targets = np.array(sorted(float(t) for t in sample_times))
        if targets.size and (targets[0] < 0.0 or targets[-1] > t_end + 1e-12):
            raise ParameterError("sample times must lie in [0, t_end]")

    limit = 10.0 * max(np.linalg.norm(state), 1e-300)
    trajectory = TodaTrajectory(times=targets, states=[])
    now = 0.0
    for target in targets:
        span = target - now
        if span > 0.0:
            steps = int(np.ceil(span / dt - 1e-12))
            h = span / steps
            for _ in range(steps):
                k1 = toda_vector_field(state)
                k2 = toda_vector_field(state + 0.5 * h * k1)
                k3 = toda_vector_field(state + 0.5 * h * k2)
                k4 = toda_vector_field(state + h * k3)
                state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                if not np.all(np.isfinite(state)) or np.linalg.norm(state) > limit:
                    raise IntegrationError(
                        f"RK4 step rejected near t = {now:.6g}: norm exceeded 10x the initial norm"
                    )
            now = target
        trajectory.states.append(state.copy())
    return trajectory


def deflation_residuals(matrix: np.ndarray) -> np.ndarray:
    """Frobenius norms of the off-diagonal block for each split j = 1..n-1."""

    matrix = np.asarray(getattr(matrix, "entries", matrix))
    n = matrix.shape[0]
    return np.array([float(np.linalg.norm(matrix[:j, j:])) for j in range(1, n)])


def first_deflation(matrix: np.ndarray, epsilon: float) -> Optional[int]:
    """Smallest split j whose block residual is at most ``epsilon``, if any."""

    residuals = deflation_residuals(matrix)
    hits = np.nonzero(residuals <= epsilon)[0]
    return int(hits[0]) + 1 if hits.size else None


__all__ = [
    "FirstRowState",
    "TodaClock",
    "TodaTrajectory",
    "deflation_residuals",
    "energy",
    "first_deflation",
    "first_row_state",
    "halting_time_t1",
    "ode_oracle",
    "toda_vector_field",
    "x11",
]
