from .geometry import (
    element_coords,
    pairwise_distance,
    element_positions,
    distance_matrix,
    jakes_correlation,
    matrix_sqrt,
    build_correlation,
)
from .channel import (
    path_loss,
    draw_channel,
    draw_realization,
    cascaded_coefficients,
    cascaded_matrix,
    selected_indices,
)
from .rate import effective_gain, achievable_rate, batch_rates, rate_upper_bound

__all__ = [
    'element_coords',
    'pairwise_distance',
    'element_positions',
    'distance_matrix',
    'jakes_correlation',
    'matrix_sqrt',
    'build_correlation',
    'path_loss',
    'draw_channel',
    'draw_realization',
    'cascaded_coefficients',
    'cascaded_matrix',
    'selected_indices',
    'effective_gain',
    'achievable_rate',
    'batch_rates',
    'rate_upper_bound',
]
