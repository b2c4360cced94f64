"""Driven and shock Toda-type lattices integrated with velocity Verlet.

Particles k = 1..K interact through nearest-neighbour forces
x_k'' = F(x_{k-1} - x_k) - F(x_k - x_{k+1}). Particle 0 is a prescribed
driver; particle K+1 is a virtual neighbour held at its rest position, which
continues the undisturbed semi-infinite lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import bisect

from ..logging import get_logger
from .errors import LatticeBlowUpError, ParameterError

LOGGER = get_logger(__name__)

BLOW_UP_LIMIT = 1e6
A_CRIT = 1.0
MIN_SITES = 10
FRONT_SOUND_FACTOR = 1.25
FRONT_TAIL_WIDTH = 12.0
FRONT_MARGIN_SITES = 10


class LatticeMode(str, Enum):
    SHOCK = "shock"
    DRIVEN = "driven"
    RING = "ring"


@dataclass(frozen=True)
class ForceLaw:
    """F(x) = e^x + delta * x with potential e^x + delta * x^2 / 2."""

    delta: float = 0.0

    @property
    def name(self) -> str:
        return "exp" if self.delta == 0.0 else "perturbed_exp"

    def force(self, x: np.ndarray) -> np.ndarray:
        return np.exp(x) + self.delta * x

    def potential(self, x: np.ndarray) -> np.ndarray:
        return np.exp(x) + 0.5 * self.delta * x * x

    def stiffness(self, x: float) -> float:
        """F'(x); its square root at the rest bond is the linear sound speed."""

        return math.exp(x) + self.delta

    @classmethod
    def exp(cls) -> "ForceLaw":
        return cls()

    @classmethod
    def perturbed_exp(cls, delta: float) -> "ForceLaw":
        return cls(delta=float(delta))

    @classmethod
    def from_name(cls, name: str, delta: float = 0.0) -> "ForceLaw":
        normalized = name.strip().lower().replace("-", "_")
        if normalized == "exp":
            return cls.exp()
        if normalized == "perturbed_exp":
            return cls.perturbed_exp(delta)
        raise ParameterError(f"Unknown force law: {name}")


@dataclass(frozen=True)
class SineProfile:
    """h(theta) = amplitude * sin(theta)."""

    amplitude: float = 0.1

    def __call__(self, theta: float) -> float:
        return self.amplitude * math.sin(theta)


@dataclass(frozen=True)
class Driver:
    """Boundary particle x_0(t) = 2at (+ h(gamma t) when driven)."""

    a: float
    gamma: float = 1.0
    h: Optional[Callable[[float], float]] = None

    @property
    def drift(self) -> float:
        return 2.0 * self.a

    def position(self, t: float) -> float:
        base = self.drift * t
        if self.h is not None:
            base += self.h(self.gamma * t)
        return base


@dataclass(frozen=True)
class LatticeState:
    positions: np.ndarray
    velocities: np.ndarray
    t: float
    mode: LatticeMode
    driver: Optional[Driver]
    force: ForceLaw = field(default_factory=ForceLaw)
    spacing: float = 1.0

    def __post_init__(self) -> None:
        if self.positions.shape != self.velocities.shape or self.positions.ndim != 1:
            raise ParameterError("positions and velocities must be 1-d arrays of equal length")
        if self.mode is not LatticeMode.RING and self.driver is None:
            raise ParameterError(f"{self.mode.value} lattices need a driver")

    @property
    def size(self) -> int:
        return int(self.positions.shape[0])

    @property
    def anchor(self) -> float:
        """Rest position of the virtual particle K+1."""

        return self.spacing * (self.size + 1)

    def rest_positions(self) -> np.ndarray:
        return self.spacing * np.arange(1, self.size + 1, dtype=float)


def _check_size(size: int) -> None:
    if size < MIN_SITES:
        raise ParameterError(f"lattice needs at least {MIN_SITES} particles, got {size}")


def init_shock(size: int, a: float, force: Optional[ForceLaw] = None) -> LatticeState:
    """x_k = k, v_k = 0, driver 2at."""

    _check_size(size)
    if a < 0.0:
        raise ParameterError("driver speed parameter a must be nonnegative")
    return LatticeState(
        positions=np.arange(1, size + 1, dtype=float),
        velocities=np.zeros(size),
        t=0.0,
        mode=LatticeMode.SHOCK,
        driver=Driver(a=a),
        force=force or ForceLaw(),
        spacing=1.0,
    )


def init_driven(
    size: int,
    a: float,
    gamma: float,
    h: Optional[Callable[[float], float]] = None,
    force: Optional[ForceLaw] = None,
) -> LatticeState:
    """x_k = v_k = 0, driver 2at + h(gamma t)."""

    _check_size(size)
    if not gamma > 0.0:
        raise ParameterError("gamma must be positive")
    return LatticeState(
        positions=np.zeros(size),
        velocities=np.zeros(size),
        t=0.0,
        mode=LatticeMode.DRIVEN,
        driver=Driver(a=a, gamma=gamma, h=h),
        force=force or ForceLaw(),
        spacing=0.0,
    )


def init_ring(
    size: int,
    spacing: float = 1.0,
    velocities: Optional[np.ndarray] = None,
    force: Optional[ForceLaw] = None,
) -> LatticeState:
    """Periodic chain with x_{k+K} = x_k + K * spacing."""

    _check_size(size)
    v = np.zeros(size) if velocities is None else np.array(velocities, dtype=float)
    return LatticeState(
        positions=spacing * np.arange(1, size + 1, dtype=float),
        velocities=v,
        t=0.0,
        mode=LatticeMode.RING,
        driver=None,
        force=force or ForceLaw(),
        spacing=spacing,
    )


def _profile_slope(h: Callable[[float], float]) -> float:
    thetas = np.linspace(0.0, 2.0 * math.pi, 721)
    values = np.array([h(float(theta)) for theta in thetas])
    return float(np.max(np.abs(np.gradient(values, thetas))))


def front_speed_bound(state: LatticeState) -> float:
    """Sites per unit time a disturbance can cover.

    The larger of the driver's top speed and 1.25 times the linear sound
    speed sqrt(F'(-spacing)) of the resting lattice.
    """

    top = 0.0
    if state.driver is not None:
        top = abs(state.driver.drift)
        if state.driver.h is not None:
            top += state.driver.gamma * _profile_slope(state.driver.h)
    sound = math.sqrt(max(state.force.stiffness(-state.spacing), 0.0))
    return max(top, FRONT_SOUND_FACTOR * sound)


def horizon_sites(state: LatticeState, t_end: float) -> int:
    """Sites that can be disturbed by ``t_end``, with a dispersive tail and a safety margin."""

    span = max(t_end - state.t, 0.0)
    reach = front_speed_bound(state) * span + FRONT_TAIL_WIDTH * span ** (1.0 / 3.0)
    return int(math.ceil(reach)) + FRONT_MARGIN_SITES


def check_horizon(state: LatticeState, t_end: float) -> None:
    """Reject runs whose front could reach the clamped far end before ``t_end``."""

    if state.mode is LatticeMode.RING:
        return
    needed = horizon_sites(state, t_end)
    if needed > state.size:
        limit = state.t
        while horizon_sites(state, limit + 1.0) <= state.size:
            limit += 1.0
        raise ParameterError(
            f"a lattice of {state.size} sites holds the front only up to t = {limit:g}; "
            f"t_end = {t_end:g} needs at least {needed} sites"
        )


def _neighbours(state: LatticeState, positions: np.ndarray, t: float) -> Tuple[np.ndarray, np.ndarray]:
    left = np.empty_like(positions)
    right = np.empty_like(positions)
    left[1:] = positions[:-1]
    right[:-1] = positions[1:]
    if state.mode is LatticeMode.RING:
        span = state.size * state.spacing
        left[0] = positions[-1] - span
        right[-1] = positions[0] + span
    else:
        left[0] = state.driver.position(t)  # type: ignore[union-attr]
        right[-1] = state.anchor
    return left, right


def accelerations(state: LatticeState, positions: Optional[np.ndarray] = None, t: Optional[float] = None) -> np.ndarray:
    x = state.positions if positions is None else positions
    time = state.t if t is None else t
    left, right = _neighbours(state, x, time)
    return state.force.force(left - x) - state.force.force(x - right)


def energy(state: LatticeState) -> float:
    """Kinetic energy plus bond potentials, driver and anchor bonds included."""

    left, _ = _neighbours(state, state.positions, state.t)
    potential = float(np.sum(state.force.potential(left - state.positions)))
    if state.mode is not LatticeMode.RING:
        potential += float(state.force.potential(np.array(state.positions[-1] - state.anchor)))
    return 0.5 * float(np.dot(state.velocities, state.velocities)) + potential


def _check_blow_up(positions: np.ndarray, t: float) -> None:
    if not np.all(np.isfinite(positions)) or float(np.max(np.abs(positions))) > BLOW_UP_LIMIT:
        raise LatticeBlowUpError(f"lattice positions exceeded {BLOW_UP_LIMIT:g} at t = {t:.6g}")


def _verlet(
    state: LatticeState, dt: float, acceleration: np.ndarray
) -> Tuple[LatticeState, np.ndarray]:
    half = state.velocities + 0.5 * dt * acceleration
    positions = state.positions + dt * half
    t_next = state.t + dt
    _check_blow_up(positions, t_next)
    acceleration_next = accelerations(state, positions, t_next)
    velocities = half + 0.5 * dt * acceleration_next
    return replace(state, positions=positions, velocities=velocities, t=t_next), acceleration_next


def step(state: LatticeState, dt: float) -> LatticeState:
    """Advance one velocity-Verlet step."""

    if not dt > 0.0:
        raise ParameterError("dt must be positive")
    advanced, _ = _verlet(state, dt, accelerations(state))
    return advanced


@dataclass
class LatticeTrajectory:
    """Snapshots of positions and velocities; ``drift`` is the moving-frame speed."""

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    drift: float = 0.0
    max_far_displacement: float = 0.0

    @property
    def size(self) -> int:
        return int(self.positions.shape[1])

    def moving_frame(self, k: int) -> np.ndarray:
        return self.positions[:, k - 1] - self.drift * self.times

    def snapshot_index(self, t: float, tolerance: float = 1e-9) -> int:
        index = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[index] - t) > tolerance * max(1.0, abs(t)):
            raise ParameterError(f"no snapshot recorded at t = {t}")
        return index

    def rows(self) -> Iterator[Tuple[float, int, float, float]]:
        for i, t in enumerate(self.times):
            for k in range(self.size):
                yield float(t), k + 1, float(self.positions[i, k]), float(self.velocities[i, k])


def simulate(
    state: LatticeState, dt: float, t_end: float, stride: int = 1
) -> Tuple[LatticeState, LatticeTrajectory]:
    """Integrate to ``t_end`` recording every ``stride``-th step (and the last)."""

    if not dt > 0.0:
        raise ParameterError("dt must be positive")
    if stride < 1:
        raise ParameterError("stride must be at least 1")
    steps = int(round((t_end - state.t) / dt))
    if steps < 0 or abs(state.t + steps * dt - t_end) > 1e-9 * max(1.0, abs(t_end)):
        raise ParameterError("t_end - t must be a nonnegative multiple of dt")

    rest_far = state.rest_positions()[-1]
    times: List[float] = [state.t]
    positions: List[np.ndarray] = [state.positions.copy()]
    velocities: List[np.ndarray] = [state.velocities.copy()]
    far = 0.0
    acceleration = accelerations(state)
    current = state
    t0 = state.t
    for index in range(1, steps + 1):
        current, acceleration = _verlet(current, dt, acceleration)
        # Rebuild t from the step count so long runs land on t_end exactly.
        current = replace(current, t=t0 + index * dt)
        if current.mode is not LatticeMode.RING:
            far = max(far, abs(float(current.positions[-1]) - rest_far))
        if index % stride == 0 or index == steps:
            times.append(current.t)
            positions.append(current.positions.copy())
            velocities.append(current.velocities.copy())

    trajectory = LatticeTrajectory(
        times=np.array(times),
        positions=np.array(positions),
        velocities=np.array(velocities),
        drift=current.driver.drift if current.driver is not None else 0.0,
        max_far_displacement=far,
    )
    return current, trajectory


@dataclass(frozen=True)
class PeriodicityReport:
    site: int
    period: float
    residual: float
    window: float
    start: float


@dataclass(frozen=True)
class BinaryReport:
    site: int
    residual: float
    mean_spacing: float
    window: float
    start: float


def _window_start(trajectory: LatticeTrajectory, window: float, period: float, start: Optional[float]) -> float:
    if window <= 0.0:
        raise ParameterError("window must be positive")
    first, last = float(trajectory.times[0]), float(trajectory.times[-1])
    begin = last - window - period if start is None else start
    slack = 1e-9 * max(1.0, last)
    if begin < first - slack or begin + window + period > last + slack:
        raise ParameterError(
            f"trajectory [{first:g}, {last:g}] does not cover [{begin:g}, {begin + window + period:g}]"
        )
    return begin


def _check_site(trajectory: LatticeTrajectory, k: int, reach: int = 0) -> None:
    if not 1 <= k <= trajectory.size - reach:
        raise ParameterError(f"site {k} is outside the lattice of size {trajectory.size}")


def periodicity_residual(
    trajectory: LatticeTrajectory, k: int, period: float, window: float, start: Optional[float] = None
) -> PeriodicityReport:
    """max |y_k(t + P) - y_k(t)| over the window, y_k = x_k - drift * t.

    The window defaults to the latest one the trajectory covers.
    """

    _check_site(trajectory, k)
    if not period > 0.0:
        raise ParameterError("period must be positive")
    begin = _window_start(trajectory, window, period, start)
    if trajectory.times.size < 4:
        raise ParameterError("trajectory needs at least four snapshots")
    spline = CubicSpline(trajectory.times, trajectory.moving_frame(k))
    mask = (trajectory.times >= begin) & (trajectory.times <= begin + window)
    sample = trajectory.times[mask]
    if sample.size == 0:
        raise ParameterError("no snapshots inside the periodicity window")
    residual = float(np.max(np.abs(spline(sample + period) - spline(sample))))
    return PeriodicityReport(site=k, period=period, residual=residual, window=window, start=begin)


def binary_residual(
    trajectory: LatticeTrajectory, k: int, window: float, start: Optional[float] = None
) -> BinaryReport:
    """Variation of the two-site spacing x_{k+2} - x_k over the window."""

    _check_site(trajectory, k, reach=2)
    begin = _window_start(trajectory, window, 0.0, start)
    mask = (trajectory.times >= begin) & (trajectory.times <= begin + window)
    spacing = trajectory.positions[mask, k + 1] - trajectory.positions[mask, k - 1]
    if spacing.size == 0:
        raise ParameterError("no snapshots inside the binary window")
    mean = float(np.mean(spacing))
    return BinaryReport(
        site=k,
        residual=float(np.max(np.abs(spacing - mean))),
        mean_spacing=mean,
        window=window,
        start=begin,
    )


@dataclass(frozen=True)
class DecayProfile:
    sites: np.ndarray
    residuals: np.ndarray
    slope_coefficient: float
    offset: float
    log_slope: float

    @property
    def decays(self) -> bool:
        return bool(self.log_slope < 0.0)


def decay_profile(
    positions: np.ndarray,
    fit_sites: Optional[Tuple[int, int]] = None,
    slope_sites: Optional[Tuple[int, int]] = None,
    floor: float = 1e-13,
) -> DecayProfile:
    """Fit x_k ~ c k + d on ``fit_sites`` and measure how |x_k - c k - d| decays.

    Sites are 1-based inclusive ranges. The fit defaults to the middle third
    of the lattice; the log-linear slope is taken over the sites before it,
    ignoring residuals below ``floor``.
    """

    x = np.asarray(positions, dtype=float)
    size = x.shape[0]
    lo, hi = fit_sites if fit_sites is not None else (size // 3, 2 * size // 3)
    if lo < 1 or hi > size or hi - lo + 1 < 3:
        raise ParameterError(f"fit window [{lo}, {hi}] is too small or outside the lattice")
    sites = np.arange(1, size + 1, dtype=float)
    c, d = np.polyfit(sites[lo - 1 : hi], x[lo - 1 : hi], 1)
    residuals = np.abs(x - c * sites - d)

    s_lo, s_hi = slope_sites if slope_sites is not None else (1, lo - 1)
    window = slice(s_lo - 1, s_hi)
    usable = residuals[window] > floor
    if int(np.count_nonzero(usable)) < 2:
        log_slope = float("nan")
    else:
        log_slope = float(np.polyfit(sites[window][usable], np.log(residuals[window][usable]), 1)[0])
    return DecayProfile(
        sites=sites.astype(int),
        residuals=residuals,
        slope_coefficient=float(c),
        offset=float(d),
        log_slope=log_slope,
    )


def decay_profile_at(trajectory: LatticeTrajectory, t: float, **kwargs) -> DecayProfile:
    """``decay_profile`` of the snapshot recorded at time ``t``."""

    return decay_profile(trajectory.positions[trajectory.snapshot_index(t)], **kwargs)


def richardson_ratio(state: LatticeState, dt: float, t_end: float) -> float:
    """||x_dt - x_{dt/2}|| / ||x_{dt/2} - x_{dt/4}|| at ``t_end``; about 4 for a second-order scheme."""

    coarse, _ = simulate(state, dt, t_end, stride=max(1, int(round(t_end / dt))))
    middle, _ = simulate(state, dt / 2.0, t_end, stride=max(1, int(round(2 * t_end / dt))))
    fine, _ = simulate(state, dt / 4.0, t_end, stride=max(1, int(round(4 * t_end / dt))))
    denominator = float(np.linalg.norm(middle.positions - fine.positions))
    if denominator == 0.0:
        raise ParameterError("step sizes too small to resolve the integration error")
    return float(np.linalg.norm(coarse.positions - middle.positions)) / denominator


def locate_threshold(
    measure: Callable[[float], float], lo: float, hi: float, level: float, tol: float = 1e-2
) -> float:
    """Bisect for the parameter where ``measure`` crosses ``level``."""

    if not lo < hi:
        raise ParameterError("threshold bracket must satisfy lo < hi")
    f_lo = measure(lo) - level
    f_hi = measure(hi) - level
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise ParameterError(f"measure does not cross {level} on [{lo}, {hi}]")
    return float(bisect(lambda value: measure(value) - level, lo, hi, xtol=tol))


__all__ = [
    "A_CRIT",
    "BinaryReport",
    "DecayProfile",
    "Driver",
    "ForceLaw",
    "LatticeMode",
    "LatticeState",
    "LatticeTrajectory",
    "PeriodicityReport",
    "SineProfile",
    "accelerations",
    "binary_residual",
    "check_horizon",
    "decay_profile",
    "decay_profile_at",
    "energy",
    "front_speed_bound",
    "horizon_sites",
    "init_driven",
    "init_ring",
    "init_shock",
    "locate_threshold",
    "periodicity_residual",
    "richardson_ratio",
    "simulate",
    "step",
]
