import math

import numpy as np
import pytest

from models.surface import SurfaceGrid
from physics.geometry import (
    build_correlation,
    distance_matrix,
    element_coords,
    element_positions,
    jakes_correlation,
    matrix_sqrt,
    pairwise_distance,
)
from utils.errors import InvalidInputError

LAMBDA = 0.06


def make_grid(my, mz, spacing_fraction=0.2):
    return SurfaceGrid(my=my, mz=mz, spacing_m=spacing_fraction * LAMBDA, wavelength_m=LAMBDA)


@pytest.mark.parametrize("m, expected", [(0, (0, 0)), (9, (0, 9)), (10, (1, 0)), (99, (9, 9))])
def test_element_coords_row_major(m, expected):
    assert element_coords(m, make_grid(10, 10)) == expected


def test_element_coords_is_a_bijection():
    grid = make_grid(4, 3)
    coords = {element_coords(m, grid) for m in range(grid.m)}
    assert coords == {(row, col) for row in range(3) for col in range(4)}


@pytest.mark.parametrize("m", [-1, 100])
def test_element_coords_rejects_out_of_range(m):
    with pytest.raises(InvalidInputError):
        element_coords(m, make_grid(10, 10))


def test_pairwise_distance_examples():
    grid = SurfaceGrid(my=10, mz=10, spacing_m=0.01, wavelength_m=LAMBDA)
    assert pairwise_distance(7, 7, grid) == 0.0
    assert pairwise_distance(3, 4, grid) == pytest.approx(0.01)
    assert pairwise_distance(0, 11, grid) == pytest.approx(0.01 * math.sqrt(2))


def test_pairwise_distance_is_a_metric():
    grid = make_grid(6, 5)
    rng = np.random.default_rng(7)
    for i, j, k in rng.integers(0, grid.m, size=(200, 3)):
        d_ij = pairwise_distance(i, j, grid)
        assert d_ij == pytest.approx(pairwise_distance(j, i, grid))
        assert (d_ij == 0) == (i == j)
        assert d_ij <= pairwise_distance(i, k, grid) + pairwise_distance(k, j, grid) + 1e-15


def test_distance_matrix_matches_scalar_distance():
    grid = make_grid(4, 4)
    d = distance_matrix(grid)
    for i in range(grid.m):
        for j in range(grid.m):
            assert d[i, j] == pytest.approx(pairwise_distance(i, j, grid), abs=1e-15)


def test_element_positions_layout():
    grid = SurfaceGrid(my=3, mz=2, spacing_m=0.5, wavelength_m=2.0)
    np.testing.assert_allclose(
        element_positions(grid),
        [[0, 0], [0.5, 0], [1.0, 0], [0, 0.5], [0.5, 0.5], [1.0, 0.5]],
    )


def test_jakes_correlation_values():
    assert jakes_correlation(0.0, LAMBDA) == 1.0
    assert jakes_correlation(LAMBDA / 2, LAMBDA) == pytest.approx(0.0, abs=1e-15)
    x = 0.4 * math.pi
    assert jakes_correlation(0.2 * LAMBDA, LAMBDA) == pytest.approx(math.sin(x) / x, rel=1e-14)
    assert jakes_correlation(0.2 * LAMBDA, LAMBDA) == pytest.approx(0.75683, abs=1e-5)


def test_build_correlation_two_elements():
    corr = build_correlation(make_grid(2, 1, spacing_fraction=0.2))
    x = 0.4 * math.pi
    np.testing.assert_allclose(corr.j, [[1.0, math.sin(x) / x], [math.sin(x) / x, 1.0]], rtol=1e-14)


def test_build_correlation_half_wavelength_is_uncorrelated():
    corr = build_correlation(make_grid(2, 1, spacing_fraction=0.5))
    assert corr.j[0, 1] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("side", [1, 2, 5, 10, 16])
def test_correlation_algebra(side):
    spacing = 2.0 / (side - 1) if side > 1 else 0.2
    corr = build_correlation(make_grid(side, side, spacing_fraction=spacing))
    j, root = corr.j, corr.j_sqrt

    assert np.array_equal(j, j.T)
    np.testing.assert_array_equal(np.diag(j), 1.0)
    assert np.all(np.abs(j) <= 1.0)
    assert np.array_equal(root, root.T)

    eigvals, eigvecs = np.linalg.eigh(j)
    j_clamped = (eigvecs * np.maximum(eigvals, 0.0)) @ eigvecs.T
    assert np.linalg.norm(root @ root - j_clamped) <= 1e-8 * np.linalg.norm(j)


def test_correlation_magnitude_below_one_off_diagonal():
    grid = make_grid(8, 8, spacing_fraction=2.0 / 7)
    corr = build_correlation(grid)
    rng = np.random.default_rng(3)
    for i, j in rng.integers(0, grid.m, size=(300, 2)):
        if i != j:
            assert abs(corr.j[i, j]) < 1.0


def test_correlation_model_is_read_only():
    corr = build_correlation(make_grid(3, 3))
    with pytest.raises(ValueError):
        corr.j[0, 0] = 2.0


def test_matrix_sqrt_examples():
    np.testing.assert_allclose(matrix_sqrt(np.eye(3)), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(matrix_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)


def test_matrix_sqrt_clamps_negative_eigenvalues():
    j = np.array([[1.0, 2.0], [2.0, 1.0]])  # eigenvalues 3 and -1
    root = matrix_sqrt(j)
    np.testing.assert_allclose(root @ root, [[1.5, 1.5], [1.5, 1.5]], atol=1e-12)


def test_matrix_sqrt_eigen_floor():
    root = matrix_sqrt(np.diag([1e-6, 4.0]), eigen_floor=0.01)
    np.testing.assert_allclose(root, np.diag([0.1, 2.0]), atol=1e-14)


@pytest.mark.parametrize(
    "bad",
    [
        np.ones((2, 3)),
        np.array([[1.0, np.nan], [np.nan, 1.0]]),
        np.array([[1.0, 0.5], [0.1, 1.0]]),
    ],
)
def test_matrix_sqrt_rejects_invalid_input(bad):
    with pytest.raises(InvalidInputError):
        matrix_sqrt(bad)


def test_sparse_grid_logs_warning(caplog):
    with caplog.at_level("WARNING"):
        grid = SurfaceGrid(my=2, mz=2, spacing_m=2 * LAMBDA, wavelength_m=LAMBDA)
    assert not grid.dense
    assert "half a wavelength" in caplog.text
