"""
TrIM module: transformed and weighted Mondrian forests with EGOP refinement.
"""

from .schedule import Schedule, default_schedule
from .trim_model import (
    EvalPointMode,
    TrimConfig,
    TrimMode,
    TrimModel,
    fit_model,
    fit_transformed,
    fit_trim,
    fit_weighted,
    oracle_transform,
)
from .model_store import load_model, save_model

__all__ = [
    'Schedule', 'default_schedule', 'EvalPointMode', 'TrimConfig', 'TrimMode',
    'TrimModel', 'fit_model', 'fit_transformed', 'fit_trim', 'fit_weighted',
    'oracle_transform', 'load_model', 'save_model',
]
