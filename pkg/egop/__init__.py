"""
EGOP module for gradient outer products, transforms and importance weights.
"""

from .gradient import (
    EgopEstimate,
    ImportanceWeights,
    IndicatorMode,
    approx_gradient,
    estimate_egop,
    gradient_matrix,
    importance_weights,
)
from .transform import TransformMatrix, l21_norm, normalize_matrix, normalize_transform

__all__ = [
    'EgopEstimate', 'ImportanceWeights', 'IndicatorMode', 'approx_gradient',
    'estimate_egop', 'gradient_matrix', 'importance_weights',
    'TransformMatrix', 'l21_norm', 'normalize_matrix', 'normalize_transform',
]
