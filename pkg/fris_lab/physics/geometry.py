"""Surface lattice geometry and the Jakes spatial-correlation model.

Elements are indexed row-major: element m sits in lattice row m // my and column m % my,
so the distance between two elements is the Euclidean lattice distance scaled by the spacing.
The correlation between elements at distance d is j0(2 pi d / lambda) = sin(x) / x.
"""

import logging
import math
from typing import Tuple

import numpy as np

from models.surface import CorrelationModel, SurfaceGrid
from utils.errors import InvalidInputError

logger = logging.getLogger(__name__)


def element_coords(m: int, grid: SurfaceGrid) -> Tuple[int, int]:
    """Return the (row, col) lattice position of 0-based element m."""
    if not 0 <= m < grid.m:
        raise InvalidInputError(f"element index {m} outside 0..{grid.m - 1}")
    return m // grid.my, m % grid.my


def pairwise_distance(i: int, j: int, grid: SurfaceGrid) -> float:
    row_i, col_i = element_coords(i, grid)
    row_j, col_j = element_coords(j, grid)
    return grid.spacing_m * math.hypot(col_i - col_j, row_i - row_j)


def element_positions(grid: SurfaceGrid) -> np.ndarray:
    """(y, z) coordinates in meters of every element, shape (M, 2)."""
    index = np.arange(grid.m)
    return grid.spacing_m * np.column_stack((index % grid.my, index // grid.my)).astype(float)


def distance_matrix(grid: SurfaceGrid) -> np.ndarray:
    positions = element_positions(grid)
    diff = positions[:, np.newaxis, :] - positions[np.newaxis, :, :]
    return np.linalg.norm(diff, axis=2)


def jakes_correlation(distance_m: np.ndarray, wavelength_m: float) -> np.ndarray:
    # np.sinc(t) = sin(pi t) / (pi t), so t = 2 d / lambda gives j0(2 pi d / lambda)
    return np.sinc(2.0 * np.asarray(distance_m, dtype=float) / wavelength_m)


def matrix_sqrt(j: np.ndarray, eigen_floor: float = 0.0) -> np.ndarray:
    """Symmetric PSD square root of a symmetric matrix.

    Eigenvalues below ``eigen_floor`` are raised to it before taking the root, so the
    result R satisfies R @ R == Q diag(max(lambda, floor)) Q^T.

    Raises:
        InvalidInputError: If the matrix is not square, not finite or not symmetric.
    """
    j = np.asarray(j, dtype=float)
    if j.ndim != 2 or j.shape[0] != j.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {j.shape}")
    if not np.all(np.isfinite(j)):
        raise InvalidInputError("matrix contains non-finite entries")
    if eigen_floor < 0:
        raise InvalidInputError("eigen_floor must be nonnegative")
    scale = max(1.0, float(np.abs(j).max(initial=0.0)))
    if not np.allclose(j, j.T, rtol=0.0, atol=1e-12 * scale):
        raise InvalidInputError("matrix is not symmetric")

    try:
        eigvals, eigvecs = np.linalg.eigh(j)
    except np.linalg.LinAlgError as e:
        raise InvalidInputError(f"eigendecomposition failed: {e}") from e

    clamped = np.maximum(eigvals, eigen_floor)
    n_clamped = int(np.count_nonzero(eigvals < eigen_floor))
    if n_clamped:
        logger.debug("Clamped %d of %d eigenvalues to %.3g", n_clamped, eigvals.size, eigen_floor)

    root = (eigvecs * np.sqrt(clamped)) @ eigvecs.T
    return 0.5 * (root + root.T)


def build_correlation(grid: SurfaceGrid, eigen_floor: float = 0.0) -> CorrelationModel:
    """Assemble J[i][j] = j0(2 pi d_ij / lambda) for the grid and its square-root factor."""
    j = jakes_correlation(distance_matrix(grid), grid.wavelength_m)
    j = 0.5 * (j + j.T)
    np.fill_diagonal(j, 1.0)
    logger.debug("Built %dx%d correlation matrix for a %dx%d grid", j.shape[0], j.shape[1], grid.my, grid.mz)
    return CorrelationModel(j=j, j_sqrt=matrix_sqrt(j, eigen_floor), eigen_floor=eigen_floor)
