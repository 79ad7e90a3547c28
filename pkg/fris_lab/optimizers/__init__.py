from .ceo import (
    init_params,
    inverse_cdf_level,
    sample_phase_levels,
    sample_phases,
    sample_selections,
    sample_selection,
    repair_selections,
    repair_selection,
    draw_candidates,
    candidate_keys,
    draw_unseen,
    rank_elite,
    elite_frequencies,
    select_elite,
    update_parameters,
    smooth,
    apply_floor,
    optimize,
)
from .baselines import (
    plan_subgrid,
    uniform_subgrid_selection,
    quantized_alignment_phases,
    aligned_baseline,
    ris_baseline,
)
from .oracle import exhaustive_search, search_size

__all__ = [
    'init_params',
    'inverse_cdf_level',
    'sample_phase_levels',
    'sample_phases',
    'sample_selections',
    'sample_selection',
    'repair_selections',
    'repair_selection',
    'draw_candidates',
    'candidate_keys',
    'draw_unseen',
    'rank_elite',
    'elite_frequencies',
    'select_elite',
    'update_parameters',
    'smooth',
    'apply_floor',
    'optimize',
    'plan_subgrid',
    'uniform_subgrid_selection',
    'quantized_alignment_phases',
    'aligned_baseline',
    'ris_baseline',
    'exhaustive_search',
    'search_size',
]
