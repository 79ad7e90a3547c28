from .experiment import (
    derive_grid,
    trial_seed,
    build_context,
    solve_trial,
    run_trial,
    run_experiment,
    run_sweep,
)
from .results import write_csv, read_csv, summarize_frame, summarize, render_layout

__all__ = [
    'derive_grid',
    'trial_seed',
    'build_context',
    'solve_trial',
    'run_trial',
    'run_experiment',
    'run_sweep',
    'write_csv',
    'read_csv',
    'summarize_frame',
    'summarize',
    'render_layout',
]
