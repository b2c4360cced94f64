import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq

from haltlab.core.ensembles import EnsembleKind, EnsembleSpec, sample
from haltlab.core.errors import ContractViolationError, ConvergenceError, ParameterError
from haltlab.core.spectral import (
    SpectralData,
    TridiagonalMatrix,
    edge_scale,
    eigen_full,
    eigenvectors_by_inverse_iteration,
    gap_stats,
    semicircle_quantile,
    semicircle_quantiles,
    spectral_data,
    tridiagonalize,
)


def test_diagonal_matrix_is_left_unchanged():
    matrix = np.diag([3.0, -1.0, 0.5, 2.0])
    tridiagonal = tridiagonalize(matrix)

    assert np.array_equal(tridiagonal.diagonal, np.diagonal(matrix))
    assert np.array_equal(tridiagonal.off_diagonal, np.zeros(3))


@pytest.mark.parametrize("kind", [EnsembleKind.GOE, EnsembleKind.GUE, EnsembleKind.BERNOULLI_COMPLEX])
def test_tridiagonalisation_preserves_trace_and_spectrum(kind):
    matrix = sample(EnsembleSpec(kind, 12), seed=4).entries
    tridiagonal = tridiagonalize(matrix)
    scale = 12 * float(np.max(np.abs(matrix)))

    assert abs(np.sum(tridiagonal.diagonal) - np.trace(matrix).real) <= 1e-12 * scale
    assert np.allclose(
        np.linalg.eigvalsh(tridiagonal.to_dense()), np.linalg.eigvalsh(matrix), atol=1e-10
    )
    assert np.all(tridiagonal.off_diagonal >= 0.0)


def test_all_ones_matrix_keeps_its_spectrum():
    tridiagonal = tridiagonalize(np.ones((4, 4)))

    assert np.allclose(np.linalg.eigvalsh(tridiagonal.to_dense()), [0.0, 0.0, 0.0, 4.0], atol=1e-10)


def test_tridiagonalize_rejects_non_self_adjoint_input():
    with pytest.raises(ContractViolationError):
        tridiagonalize(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ContractViolationError):
        tridiagonalize(np.ones((2, 3)))


def test_eigen_full_on_diagonal_input():
    data = eigen_full(TridiagonalMatrix(np.array([3.0, 1.0, 2.0]), np.zeros(2)))

    assert np.allclose(data.eigenvalues, [1.0, 2.0, 3.0])
    assert np.allclose(data.first_components, [0.0, 0.0, 1.0])


def test_eigen_full_on_two_by_two_swap():
    data = eigen_full(TridiagonalMatrix(np.zeros(2), np.ones(1)))

    assert np.allclose(data.eigenvalues, [-1.0, 1.0], atol=1e-14)
    assert np.allclose(data.first_components, [2 ** -0.5, 2 ** -0.5], atol=1e-14)


def test_eigen_full_matches_inverse_iteration_oracle():
    rng = np.random.default_rng(8)
    tridiagonal = TridiagonalMatrix(rng.standard_normal(8), rng.standard_normal(7))
    data = eigen_full(tridiagonal)
    vectors = eigenvectors_by_inverse_iteration(tridiagonal, data.eigenvalues)
    dense = tridiagonal.to_dense()

    residuals = np.abs(dense @ vectors - vectors * data.eigenvalues[None, :])
    assert float(np.max(residuals)) <= 1e-10
    assert np.allclose(np.abs(vectors[0]), data.first_components, atol=1e-10)


@pytest.mark.parametrize("kind", [EnsembleKind.GOE, EnsembleKind.GUE])
def test_spectral_data_matches_dense_eigendecomposition(kind):
    matrix = sample(EnsembleSpec(kind, 20), seed=21).entries
    data = spectral_data(matrix)
    values, vectors = np.linalg.eigh(matrix)

    assert np.allclose(data.eigenvalues, values, atol=1e-10)
    assert np.allclose(data.first_components, np.abs(vectors[0]), atol=1e-8)
    assert data.normalization_error() < 1e-12


def test_eigen_full_reports_non_convergence():
    with pytest.raises(ConvergenceError) as excinfo:
        eigen_full(TridiagonalMatrix(np.zeros(2), np.ones(1)), max_sweeps=0)

    assert excinfo.value.index == 0


def test_gap_stats_arithmetic():
    stats = gap_stats(SpectralData(np.array([1.0, 2.0, 4.0]), np.ones(3) / np.sqrt(3)), n=3)

    assert stats.top_gap == 2.0
    assert stats.second_gap == 1.0


def test_gap_stats_allows_degenerate_top():
    stats = gap_stats(SpectralData(np.array([0.0, 1.0, 1.0]), np.ones(3) / np.sqrt(3)), n=3)

    assert stats.top_gap == 0.0


def test_scaled_edge_triple_uses_edge_zoom():
    stats = gap_stats(SpectralData(np.array([0.0, 1.0, 1.9]), np.ones(3) / np.sqrt(3)), n=100)

    assert stats.scaled_edge_triple[0] == pytest.approx(edge_scale(100) * 0.1)
    assert stats.scaled_edge_triple[0] == pytest.approx(1.357, abs=1e-3)


def test_gap_stats_needs_three_eigenvalues():
    with pytest.raises(ParameterError):
        gap_stats(SpectralData(np.array([0.0, 1.0]), np.ones(2) / np.sqrt(2)), n=2)


def test_semicircle_quantile_landmarks():
    assert semicircle_quantile(0.5) == pytest.approx(0.0, abs=1e-12)
    assert semicircle_quantile(1.0) == 2.0
    with pytest.raises(ParameterError):
        semicircle_quantile(0.0)


def test_semicircle_quantile_matches_quadrature_oracle():
    def mass(x: float) -> float:
        return quad(lambda y: np.sqrt(4.0 - y * y) / (2.0 * np.pi), -2.0, x)[0]

    oracle = brentq(lambda x: mass(x) - 0.25, -2.0, 2.0, xtol=1e-13)
    value = semicircle_quantile(0.25)

    assert -1.0 < value < 0.0
    assert abs(value - oracle) < 1e-9


def test_semicircle_quantiles_are_increasing():
    gamma = np.asarray(semicircle_quantiles(10))

    assert gamma.shape == (10,)
    assert np.all(np.diff(gamma) > 0.0)
    assert gamma[-1] == 2.0


def test_semicircle_quantiles_rescale_with_edge():
    assert semicircle_quantile(1.0, b_v=3.0) == 3.0
    assert semicircle_quantile(0.25, b_v=3.0) == pytest.approx(1.5 * semicircle_quantile(0.25))
    assert semicircle_quantiles(4, 1.0)[-1] == 1.0
    with pytest.raises(ParameterError):
        semicircle_quantile(0.5, b_v=0.0)


def test_spectral_data_csv_keeps_full_precision(tmp_path):
    data = spectral_data(sample(EnsembleSpec(EnsembleKind.GOE, 6), 11))

    path = data.to_csv(tmp_path / "spectral" / "goe.csv")
    loaded = SpectralData.from_csv(path)

    assert path.read_text().splitlines()[0] == "lambda,beta"
    assert np.array_equal(loaded.eigenvalues, data.eigenvalues)
    assert np.array_equal(loaded.first_components, data.first_components)


def test_tridiagonal_from_dense_reads_the_bands():
    dense = np.array([[1.0, 2.0, 0.0], [2.0, 3.0, 4.0], [0.0, 4.0, 5.0]])
    tridiagonal = TridiagonalMatrix.from_dense(dense)

    assert tridiagonal.diagonal.tolist() == [1.0, 3.0, 5.0]
    assert tridiagonal.off_diagonal.tolist() == [2.0, 4.0]
    assert np.array_equal(tridiagonal.to_dense(), dense)
