import math

import numpy as np
import pytest

from haltlab.core.errors import LatticeBlowUpError, ParameterError
from haltlab.core.lattice import (
    Driver,
    ForceLaw,
    LatticeMode,
    LatticeTrajectory,
    SineProfile,
    accelerations,
    binary_residual,
    check_horizon,
    decay_profile,
    decay_profile_at,
    energy,
    front_speed_bound,
    horizon_sites,
    init_driven,
    init_ring,
    init_shock,
    locate_threshold,
    periodicity_residual,
    richardson_ratio,
    simulate,
    step,
)


def test_shock_initial_state():
    state = init_shock(10, 2.0)

    assert np.array_equal(state.positions, np.arange(1.0, 11.0))
    assert np.array_equal(state.velocities, np.zeros(10))
    assert state.mode is LatticeMode.SHOCK
    assert state.driver.drift == 4.0
    assert math.isfinite(energy(state))


def test_resting_uniform_lattice_feels_no_force():
    state = init_shock(10, 0.0)

    assert np.allclose(accelerations(state), 0.0, atol=1e-15)


def test_resting_uniform_lattice_stays_put():
    state = init_shock(12, 0.0)
    advanced = step(state, 0.01)

    assert np.allclose(advanced.positions, state.positions, atol=1e-14)
    assert np.allclose(advanced.velocities, 0.0, atol=1e-14)
    assert advanced.t == pytest.approx(0.01)


@pytest.mark.slow
def test_resting_lattice_is_preserved_over_long_runs():
    state = init_shock(10, 0.0)
    final, trajectory = simulate(state, 0.01, 1000.0, stride=100_000)

    assert np.max(np.abs(final.positions - state.rest_positions())) <= 1e-12
    assert np.max(np.abs(final.velocities)) <= 1e-12
    assert trajectory.max_far_displacement <= 1e-12


def test_exponential_forces_match_nearest_neighbour_equations():
    state = init_shock(12, 2.0)
    x = state.positions + 0.3 * np.random.default_rng(3).standard_normal(12)
    t = 0.7
    padded = np.concatenate([[4.0 * t], x, [13.0]])
    expected = np.array(
        [math.exp(padded[k - 1] - padded[k]) - math.exp(padded[k] - padded[k + 1]) for k in range(1, 13)]
    )

    assert np.max(np.abs(accelerations(state, x, t) - expected)) <= 1e-14


def test_lattice_size_and_parameters_are_validated():
    with pytest.raises(ParameterError):
        init_shock(5, 1.0)
    with pytest.raises(ParameterError):
        init_shock(10, -1.0)
    with pytest.raises(ParameterError):
        init_driven(10, 1.0, 0.0)
    with pytest.raises(ParameterError):
        step(init_shock(10, 1.0), 0.0)


def test_driven_driver_position_is_periodic_offset():
    gamma = 3.0
    driver = Driver(a=0.5, gamma=gamma, h=SineProfile(0.1))
    period = 2.0 * math.pi / gamma

    assert driver.position(period) == pytest.approx(2.0 * 0.5 * period, abs=1e-12)
    assert driver.position(period / 4.0) == pytest.approx(0.25 * period + 0.1, abs=1e-12)


def test_driven_initial_state_without_profile():
    state = init_driven(10, 0.5, 3.0)

    assert np.array_equal(state.positions, np.zeros(10))
    assert state.driver.position(2.0) == pytest.approx(2.0)
    assert state.anchor == 0.0


def test_force_law_names():
    assert ForceLaw.from_name("exp") == ForceLaw()
    assert ForceLaw.from_name("perturbed-exp", 0.2).delta == 0.2
    assert ForceLaw.perturbed_exp(0.2).name == "perturbed_exp"
    with pytest.raises(ParameterError):
        ForceLaw.from_name("harmonic")


def test_ring_conserves_energy():
    rng = np.random.default_rng(1)
    state = init_ring(10, spacing=1.0, velocities=0.1 * rng.standard_normal(10))
    start = energy(state)
    final, _ = simulate(state, 2.5e-4, 10.0, stride=40_000)

    assert final.t == pytest.approx(10.0)
    assert abs(energy(final) - start) < 1e-8 * max(1.0, abs(start))


def test_verlet_is_second_order():
    ratio = richardson_ratio(init_shock(20, 1.0), 0.02, 2.0)

    assert 3.5 < ratio < 4.5


def test_simulate_requires_multiple_of_dt():
    with pytest.raises(ParameterError):
        simulate(init_shock(10, 1.0), 0.3, 1.0)


def test_simulate_records_strided_snapshots():
    final, trajectory = simulate(init_shock(10, 0.5), 0.01, 1.0, stride=25)

    assert np.allclose(trajectory.times, [0.0, 0.25, 0.5, 0.75, 1.0])
    assert trajectory.positions.shape == (5, 10)
    assert np.array_equal(trajectory.positions[-1], final.positions)
    assert trajectory.drift == 1.0
    assert trajectory.snapshot_index(0.5) == 2
    with pytest.raises(ParameterError):
        trajectory.snapshot_index(0.3)


def test_blow_up_is_reported():
    state = init_shock(10, 1.0)
    huge = state.__class__(
        positions=state.positions * 1e7,
        velocities=state.velocities,
        t=0.0,
        mode=state.mode,
        driver=state.driver,
    )

    with pytest.raises(LatticeBlowUpError):
        step(huge, 0.01)


def test_far_end_stays_at_rest_for_short_runs():
    _, trajectory = simulate(init_shock(200, 0.5), 0.01, 10.0, stride=100)

    assert trajectory.max_far_displacement < 1e-10


def _synthetic(times: np.ndarray, gamma: float) -> LatticeTrajectory:
    column = np.sin(gamma * times)
    positions = np.stack([column, column + 1.0, column + 2.0], axis=1)
    return LatticeTrajectory(times=times, positions=positions, velocities=np.zeros_like(positions))


def test_periodicity_residual_vanishes_at_true_period():
    gamma = 3.0
    trajectory = _synthetic(np.linspace(0.0, 20.0, 4001), gamma)
    report = periodicity_residual(trajectory, 1, 2.0 * math.pi / gamma, window=5.0)

    assert report.residual < 1e-6


def test_periodicity_residual_detects_wrong_period():
    gamma = 3.0
    trajectory = _synthetic(np.linspace(0.0, 20.0, 4001), gamma)
    report = periodicity_residual(trajectory, 1, math.pi / gamma, window=5.0)

    assert report.residual == pytest.approx(2.0, abs=1e-3)


def test_periodicity_window_must_fit_trajectory():
    trajectory = _synthetic(np.linspace(0.0, 5.0, 501), 3.0)

    with pytest.raises(ParameterError):
        periodicity_residual(trajectory, 1, 2.0, window=4.0)


def test_binary_residual_of_rigid_motion_is_zero():
    trajectory = _synthetic(np.linspace(0.0, 10.0, 1001), 2.0)
    report = binary_residual(trajectory, 1, window=3.0)

    assert report.residual < 1e-12
    assert report.mean_spacing == pytest.approx(2.0)


def test_decay_profile_of_linear_lattice():
    sites = np.arange(1, 31, dtype=float)
    profile = decay_profile(3.0 * sites + 1.0)

    assert profile.slope_coefficient == pytest.approx(3.0)
    assert profile.offset == pytest.approx(1.0)
    assert np.max(profile.residuals) < 1e-10


def test_decay_profile_recovers_planted_exponential():
    sites = np.arange(1, 61, dtype=float)
    profile = decay_profile(3.0 * sites + 1.0 + 2.0 ** -sites, fit_sites=(40, 60), slope_sites=(1, 20))

    assert profile.log_slope == pytest.approx(-math.log(2.0), abs=1e-3)
    assert profile.decays


def test_decay_profile_validates_fit_window():
    with pytest.raises(ParameterError):
        decay_profile(np.arange(10.0), fit_sites=(4, 5))


def test_locate_threshold_bisects_monotone_measure():
    assert locate_threshold(lambda a: a * a, 0.0, 2.0, level=1.0, tol=1e-8) == pytest.approx(1.0, abs=1e-7)
    with pytest.raises(ParameterError):
        locate_threshold(lambda a: a, 0.0, 1.0, level=5.0)


def test_decay_profile_at_selects_the_recorded_snapshot():
    sites = np.arange(1, 31, dtype=float)
    positions = np.vstack([sites, 2.0 * sites + 5.0])
    trajectory = LatticeTrajectory(times=np.array([0.0, 1.0]), positions=positions, velocities=np.zeros_like(positions))

    profile = decay_profile_at(trajectory, 1.0)

    assert profile.slope_coefficient == pytest.approx(2.0)
    assert profile.offset == pytest.approx(5.0)
    with pytest.raises(ParameterError):
        decay_profile_at(trajectory, 0.5)


def test_front_speed_bound_uses_driver_and_sound_speed():
    assert front_speed_bound(init_shock(300, 2.0)) == 4.0
    assert front_speed_bound(init_shock(300, 0.0)) == pytest.approx(1.25 * math.exp(-0.5))
    driven = init_driven(300, 2.0, 3.0, SineProfile(0.1))
    assert front_speed_bound(driven) == pytest.approx(4.3, abs=1e-3)


def test_horizon_check_rejects_runs_that_reach_the_far_end():
    shock = init_shock(300, 2.0)

    assert horizon_sites(shock, 40.0) <= 300
    check_horizon(shock, 40.0)
    with pytest.raises(ParameterError):
        check_horizon(shock, 200.0)
    check_horizon(init_ring(10), 1e6)


def test_horizon_preset_keeps_far_end_at_rest():
    shock = init_shock(300, 2.0)
    _, trajectory = simulate(shock, 0.01, 40.0, stride=1000)

    assert trajectory.max_far_displacement < 1e-10


def test_fast_driving_does_not_penetrate_the_lattice():
    state = init_driven(100, 0.5, 10.0, SineProfile(0.1))
    check_horizon(state, 10.0)
    _, trajectory = simulate(state, 0.01, 10.0, stride=100)

    profile = decay_profile_at(trajectory, 10.0)
    assert profile.log_slope < 0.0
    assert trajectory.max_far_displacement < 1e-10
