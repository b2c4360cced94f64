import numpy as np
import pytest

from haltlab.core.ensembles import EnsembleKind, EnsembleSpec, sample
from haltlab.core.errors import ContractViolationError, ParameterError
from haltlab.core.iterative import cg_halting, qr_halting, qr_step, wishart_system


def _conjugated(eigenvalues, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((len(eigenvalues), len(eigenvalues))))
    matrix = q @ np.diag(eigenvalues) @ q.T
    return 0.5 * (matrix + matrix.T)


def test_qr_step_fixes_positive_diagonal():
    matrix = np.diag([3.0, 2.0, 0.5])

    assert np.allclose(qr_step(matrix), matrix, atol=1e-15)


def test_qr_step_preserves_spectrum():
    matrix = sample(EnsembleSpec(EnsembleKind.GOE, 8), seed=1).entries
    stepped = qr_step(matrix)

    assert np.allclose(stepped, stepped.T)
    assert np.allclose(np.linalg.eigvalsh(stepped), np.linalg.eigvalsh(matrix), atol=1e-10)


def test_qr_step_on_swap_matrix_keeps_spectrum():
    stepped = qr_step(np.array([[0.0, 1.0], [1.0, 0.0]]))

    assert np.allclose(np.linalg.eigvalsh(stepped), [-1.0, 1.0], atol=1e-12)


def test_qr_step_handles_complex_hermitian_input():
    matrix = sample(EnsembleSpec(EnsembleKind.GUE, 6), seed=3).entries
    stepped = qr_step(matrix)

    assert np.allclose(stepped, stepped.conj().T)
    assert np.allclose(np.linalg.eigvalsh(stepped), np.linalg.eigvalsh(matrix), atol=1e-10)


def test_qr_step_rejects_non_symmetric_input():
    with pytest.raises(ContractViolationError):
        qr_step(np.array([[1.0, 2.0], [3.0, 4.0]]))


def test_qr_halting_on_diagonal_input_takes_no_steps():
    run = qr_halting(np.diag([2.0, 1.0, -0.5]), 1e-8, 100)

    assert run.iterations == 0
    assert run.halted
    assert run.final_residual == 0.0


def test_qr_iteration_count_follows_eigenvalue_ratio():
    delta = 0.1
    matrix = np.array([[2.0, delta], [delta, -1.0]])
    coarse = qr_halting(matrix, 1e-4, 1000)
    fine = qr_halting(matrix, 1e-8, 1000)

    # Off-diagonal contracts by |lambda_2 / lambda_1| ~ 1/2 per step.
    assert fine.iterations - coarse.iterations == pytest.approx(np.log2(1e4), abs=1.0)


def test_qr_halting_converges_to_dominant_eigenvalue():
    epsilon = 1e-6
    run = qr_halting(_conjugated([5.0, 2.0, 1.0, -1.0, 0.5], seed=4), epsilon, 10_000)

    assert run.halted
    assert abs(run.final_diagonal[0] - 5.0) < epsilon
    assert run.final_residual < epsilon


def test_qr_halting_reports_non_halting_runs():
    run = qr_halting(np.array([[0.0, 1.0], [1.0, 0.0]]), 1e-6, 5)

    assert not run.halted
    assert run.iterations == 5
    assert len(run.residuals) == 6


def test_qr_halting_validates_arguments():
    with pytest.raises(ParameterError):
        qr_halting(np.eye(2), 0.0, 10)
    with pytest.raises(ParameterError):
        qr_halting(np.eye(2), 1e-3, 0)


def test_wishart_system_shapes_and_definiteness():
    a, b = wishart_system(20, 40, seed=5)

    assert a.shape == (20, 20)
    assert np.array_equal(a, a.T)
    assert np.linalg.norm(b) == pytest.approx(1.0)
    assert np.min(np.linalg.eigvalsh(a)) > 0.0


def test_wishart_scalar_case():
    a, b = wishart_system(1, 1, seed=0)

    assert a.shape == (1, 1)
    assert a[0, 0] > 0.0
    assert abs(b[0]) == pytest.approx(1.0)


def test_wishart_requires_m_at_least_n():
    with pytest.raises(ParameterError):
        wishart_system(5, 4, seed=0)


def test_wishart_spectrum_sits_in_marchenko_pastur_support():
    lower = (1.0 - np.sqrt(0.5)) ** 2 - 0.2
    upper = (1.0 + np.sqrt(0.5)) ** 2 + 0.2
    inside = 0
    for seed in range(20):
        values = np.linalg.eigvalsh(wishart_system(50, 100, seed)[0])
        inside += int(values[0] >= lower and values[-1] <= upper)

    assert inside >= 19


def test_cg_on_identity_takes_one_step():
    b = np.array([0.6, 0.8, 0.0])
    run = cg_halting(np.eye(3), b, 1e-12, 10)

    assert run.iterations == 1
    assert np.allclose(run.solution, b)


def test_cg_terminates_after_two_steps_for_two_distinct_eigenvalues():
    a = _conjugated([1.0, 1.0, 1.0, 3.0, 3.0], seed=7)
    b = np.arange(1.0, 6.0)
    run = cg_halting(a, b / np.linalg.norm(b), 1e-10, 50)

    assert run.halted
    assert run.iterations <= 2


def test_cg_error_decreases_in_energy_norm():
    a, b = wishart_system(30, 60, seed=11)
    run = cg_halting(a, b, 1e-10, 500, keep_iterates=True)
    exact = np.linalg.solve(a, b)

    errors = [float(np.sqrt((x - exact) @ a @ (x - exact))) for x in run.iterates]
    assert run.halted
    assert all(later <= earlier + 1e-12 for earlier, later in zip(errors, errors[1:]))
    assert np.linalg.norm(a @ run.solution - b) < 1e-10


def test_cg_reports_non_halting_when_capped():
    a, b = wishart_system(30, 60, seed=12)
    run = cg_halting(a, b, 1e-12, 3)

    assert not run.halted
    assert run.iterations == 3
    assert run.final_residual >= 1e-12


def test_cg_rejects_mismatched_shapes():
    with pytest.raises(ParameterError):
        cg_halting(np.eye(3), np.ones(2), 1e-6, 10)
