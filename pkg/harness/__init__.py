"""
Harness module: experiment runners and long-format result tables.
"""

from .results import RESULT_COLUMNS, result_row, results_frame, write_results
from .experiments import (
    EXPERIMENTS,
    cv_bench,
    cv_grid,
    ebola,
    mse_vs_lifetime,
    run_experiment,
    subspace_convergence,
    trim_reiterate,
)

__all__ = [
    'RESULT_COLUMNS', 'result_row', 'results_frame', 'write_results', 'EXPERIMENTS',
    'cv_bench', 'cv_grid', 'ebola', 'mse_vs_lifetime', 'run_experiment',
    'subspace_convergence', 'trim_reiterate',
]
