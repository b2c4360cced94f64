import pytest

from haltlab.config import ExperimentConfig, ExperimentKind
from haltlab.core.ensembles import EnsembleKind
from haltlab.core.errors import ConfigurationError
from haltlab.core.pipeline.orchestrator import ExperimentOrchestrator
from haltlab.data.storage import ResultStore
from haltlab.experiments.factory import EXPERIMENTS, resolve_experiment
from haltlab.experiments.theorem1 import C_V_SWEEP


def _run(tmp_path, **fields):
    experiment = ExperimentConfig(seed=1, output_dir=tmp_path / "run", **fields)
    outcome = ExperimentOrchestrator().run(experiment)
    return outcome, ResultStore(outcome.output_dir, experiment.config_hash(), experiment.seed)


def _check(outcome, name):
    return next(check for check in outcome.summary.checks if check.name == name)


def test_factory_covers_every_kind():
    assert set(EXPERIMENTS) == set(ExperimentKind)
    experiment = ExperimentConfig(kind=ExperimentKind.CG_HALTING)

    assert type(resolve_experiment("cg_halting", experiment)).__name__ == "CgHaltingExperiment"
    with pytest.raises(ConfigurationError):
        resolve_experiment("lanczos", experiment)


def test_toda_experiment_outputs(tmp_path):
    outcome, store = _run(tmp_path, kind=ExperimentKind.TODA_T1, n=10, samples=8, epsilon=1e-8)

    for name in ("halting.csv", "tau_histogram.csv", "theorem1_scaled.csv", "corollary.csv", "summary.json"):
        assert (outcome.output_dir / name).exists()
    assert len(store.read_rows("halting.csv")) == 9
    assert outcome.summary.samples == 8
    assert outcome.summary.metrics["mean_t1"] > 0.0
    assert _check(outcome, "eigenvalue_error_below_epsilon").passed


def test_diagonal_debug_ensemble_halts_immediately(tmp_path):
    outcome, store = _run(
        tmp_path, kind=ExperimentKind.TODA_T1, ensemble=EnsembleKind.DIAGONAL, n=5, samples=1
    )

    header, row = store.read_rows("halting.csv")
    assert float(row[header.index("halting_time")]) == 0.0
    assert not (outcome.output_dir / "tau_histogram.csv").exists()
    assert outcome.passed


def test_qr_experiment_counts_iterations(tmp_path):
    outcome, store = _run(tmp_path, kind=ExperimentKind.QR_HALTING, n=6, samples=4, epsilon=1e-3, k_max=500)

    assert len(store.read_rows("halting.csv")) == 5
    assert 0.0 <= outcome.summary.metrics["non_halting"] <= 4.0


def test_cg_experiment_halts_on_wishart_systems(tmp_path):
    outcome, store = _run(tmp_path, kind=ExperimentKind.CG_HALTING, n=10, samples=5, epsilon=1e-8)

    header = store.read_rows("halting.csv")[0]
    assert "iterations" in header
    assert _check(outcome, "all_runs_halted").passed
    assert outcome.summary.metrics["mean_iterations"] >= 1.0


def test_universality_compare_across_algorithms(tmp_path):
    outcome, _ = _run(
        tmp_path,
        kind=ExperimentKind.UNIVERSALITY_COMPARE,
        n=6,
        samples=5,
        epsilon=1e-3,
        k_max=500,
        compare_algorithm="qr",
    )

    assert (outcome.output_dir / "halting_GOE-toda.csv").exists()
    assert (outcome.output_dir / "halting_GOE-qr.csv").exists()
    assert outcome.summary.samples == 10


def test_universality_compare_across_ensembles_adds_ks_check(tmp_path):
    outcome, _ = _run(
        tmp_path,
        kind=ExperimentKind.UNIVERSALITY_COMPARE,
        n=8,
        samples=6,
        epsilon=1e-6,
        compare_ensemble=EnsembleKind.BERNOULLI_REAL,
    )

    check = _check(outcome, "tau_universality_ks")
    assert 0.0 <= check.value <= 1.0


def test_theorem1_experiment_is_invariant_in_c_v(tmp_path):
    outcome, store = _run(tmp_path, kind=ExperimentKind.THEOREM1, n=10, samples=12, epsilon=1e-8)

    assert _check(outcome, "cv_invariance_n10").passed
    rows = store.read_rows("cv_sweep_n10.csv")[1:]
    assert [float(row[0]) for row in rows] == list(C_V_SWEEP)
    assert len({row[1] for row in rows}) == 1
    assert len(store.read_rows("theorem1_n10.csv")) == 13


def test_theorem1_over_n_grid_reports_corollary_trend(tmp_path):
    outcome, _ = _run(tmp_path, kind=ExperimentKind.THEOREM1, n_grid=[8, 12], samples=6, epsilon=1e-4)

    names = {check.name for check in outcome.summary.checks}
    assert {"theorem1_ks_n8", "theorem1_ks_n12", "eigenvalue_error_below_epsilon"} <= names
    assert "corollary_error_decreasing" not in names
    assert _check(outcome, "eigenvalue_error_below_epsilon").passed
    metrics = outcome.summary.metrics
    assert metrics["corollary_trend_ratio"] == pytest.approx(
        metrics["median_corollary_error_n12"] / metrics["median_corollary_error_n8"]
    )
    assert metrics["corollary_error_nonincreasing"] in (0.0, 1.0)
    assert (outcome.output_dir / "theorem1_n12.csv").exists()


def test_conditions_experiment_tables(tmp_path):
    outcome, store = _run(tmp_path, kind=ExperimentKind.CONDITIONS, n_grid=[8, 12], samples=10)

    condition1 = store.read_rows("condition1.csv")
    assert condition1[0][:3] == ["n", "p", "probability"]
    assert len(condition1) == 1 + 2 * 5
    assert _check(outcome, "condition1_monotone_n8").passed
    assert _check(outcome, "condition2_well_formed_n12").passed
    assert not (outcome.output_dir / "edge_statistics.csv").exists()
    assert outcome.passed


def test_planted_conditions_never_fail_condition1(tmp_path):
    outcome, store = _run(tmp_path, kind=ExperimentKind.CONDITIONS, ensemble=EnsembleKind.PLANTED, n=3, samples=100)

    header, *rows = store.read_rows("condition1.csv")
    assert all(float(row[header.index("probability")]) == 0.0 for row in rows)
    assert (outcome.output_dir / "edge_statistics.csv").exists()
    assert outcome.passed


def test_lattice_shock_experiment_outputs(tmp_path):
    outcome, store = _run(
        tmp_path,
        kind=ExperimentKind.LATTICE_SHOCK,
        a=0.5,
        lattice_size=40,
        dt=0.01,
        t_end=2.0,
        window=0.5,
        watch_site=2,
        snapshot_stride=10,
    )

    header = store.read_rows("periodicity.csv")[0]
    assert "residual" in header
    trajectory = store.read_rows("trajectory.csv")
    assert trajectory[0] == ["t", "k", "x", "v"]
    assert len(trajectory) == 1 + 21 * 40
    assert {"truncation_hygiene", "binary_periodicity"} <= {check.name for check in outcome.summary.checks}


def test_lattice_driven_sweep(tmp_path):
    outcome, store = _run(
        tmp_path,
        kind=ExperimentKind.LATTICE_DRIVEN,
        a=0.25,
        gamma_grid=[2.0, 3.0],
        lattice_size=50,
        dt=0.01,
        t_end=8.0,
        window=2.0,
        snapshot_stride=10,
    )

    header, *rows = store.read_rows("sweep.csv")
    assert [float(row[header.index("gamma")]) for row in rows] == [2.0, 3.0]
    assert not (outcome.output_dir / "trajectory.csv").exists()
    assert "periodicity_residual_gamma2" in outcome.summary.metrics


def test_lattice_driven_single_gamma_writes_trajectory(tmp_path):
    outcome, _ = _run(
        tmp_path,
        kind=ExperimentKind.LATTICE_DRIVEN,
        a=0.25,
        gamma=3.0,
        lattice_size=50,
        dt=0.01,
        t_end=6.0,
        window=2.0,
        snapshot_stride=10,
    )

    assert (outcome.output_dir / "trajectory.csv").exists()
    assert outcome.summary.samples == 1


def test_fredholm_grid_experiment_passes(tmp_path):
    outcome, store = _run(tmp_path, kind=ExperimentKind.FREDHOLM_GRID, s_grid=[0.5, 1.0, 2.0], samples=1)

    header, *rows = store.read_rows("fredholm.csv")
    values = [float(row[header.index("determinant")]) for row in rows]
    assert values[0] > values[1] > values[2]
    assert header[-1] == "lambda_8"
    assert outcome.passed


def test_fredholm_grid_coin_flip_column(tmp_path):
    _, store = _run(tmp_path, kind=ExperimentKind.FREDHOLM_GRID, s_grid=[1.0], samples=2000)

    header, row = store.read_rows("fredholm.csv")
    estimate = float(row[header.index("coin_flip_estimate")])
    assert estimate == pytest.approx(float(row[header.index("determinant")]), abs=0.05)


def test_reruns_are_byte_identical(tmp_path):
    fields = dict(kind=ExperimentKind.FREDHOLM_GRID, s_grid=[0.5, 1.0], samples=500, seed=3)
    first = ExperimentOrchestrator().run(ExperimentConfig(output_dir=tmp_path / "a", **fields))
    second = ExperimentOrchestrator().run(ExperimentConfig(output_dir=tmp_path / "b", **fields))

    assert (first.output_dir / "fredholm.csv").read_bytes() == (second.output_dir / "fredholm.csv").read_bytes()


def test_fast_driving_reports_negative_decay_slope(tmp_path):
    outcome, _ = _run(
        tmp_path,
        kind=ExperimentKind.LATTICE_DRIVEN,
        a=0.5,
        gamma=10.0,
        h_amplitude=0.1,
        lattice_size=100,
        dt=0.01,
        t_end=10.0,
        window=2.0,
        snapshot_stride=10,
    )

    assert outcome.summary.metrics["decay_slope_gamma10"] < 0.0
    assert _check(outcome, "truncation_hygiene").passed


@pytest.mark.slow
def test_theorem1_at_gue_n200(tmp_path):
    outcome, _ = _run(
        tmp_path,
        kind=ExperimentKind.THEOREM1,
        ensemble=EnsembleKind.GUE,
        n_grid=[100, 200],
        samples=2000,
        epsilon=1e-8,
    )

    assert outcome.summary.metrics["ks_n200"] < 0.1
    assert _check(outcome, "cv_invariance_n200").passed
    assert _check(outcome, "eigenvalue_error_below_epsilon").passed
    assert outcome.passed


@pytest.mark.slow
@pytest.mark.parametrize(
    "ensemble, compare",
    [
        (EnsembleKind.GOE, EnsembleKind.BERNOULLI_REAL),
        (EnsembleKind.GUE, EnsembleKind.BERNOULLI_COMPLEX),
    ],
)
def test_halting_time_universality_at_n100(tmp_path, ensemble, compare):
    outcome, _ = _run(
        tmp_path,
        kind=ExperimentKind.UNIVERSALITY_COMPARE,
        ensemble=ensemble,
        compare_ensemble=compare,
        n=100,
        samples=2000,
        epsilon=1e-6,
    )

    assert _check(outcome, "tau_universality_ks").passed


@pytest.mark.slow
def test_condition1_probability_small_at_p002_n200(tmp_path):
    outcome, store = _run(tmp_path, kind=ExperimentKind.CONDITIONS, n=200, samples=1000)

    header, *rows = store.read_rows("condition1.csv")
    at_p002 = next(row for row in rows if float(row[header.index("p")]) == 0.02)
    assert float(at_p002[header.index("probability")]) < 0.15
    assert _check(outcome, "condition1_monotone_n200").passed


@pytest.mark.slow
def test_edge_statistics_self_consistent_from_n200_to_n400(tmp_path):
    outcome, _ = _run(tmp_path, kind=ExperimentKind.CONDITIONS, ensemble=EnsembleKind.GUE, n_grid=[200, 400], samples=2000)

    assert _check(outcome, "edge_weight_ks_n400").passed
    assert _check(outcome, "edge_cross_n_ks_n400").passed
    assert _check(outcome, "no_degenerate_triples_n200").passed
    assert _check(outcome, "no_degenerate_triples_n400").passed


@pytest.mark.slow
def test_default_shock_preset_is_binary_periodic(tmp_path):
    outcome, _ = _run(tmp_path, kind=ExperimentKind.LATTICE_SHOCK)

    assert outcome.summary.metrics["binary_residual"] < 1e-2
    assert _check(outcome, "truncation_hygiene").passed
    assert outcome.passed
