"""
Evaluation module for subspace recovery and regression accuracy.
"""

from .subspace import (
    PrincipalAngleReport,
    SubspaceBasis,
    max_principal_angle,
    principal_angles,
    top_eigvec_subspace,
)
from .metrics import ConstantPredictor, mse
from .cross_validation import CvResult, ModelSpec, cross_validate, fold_assignment

__all__ = [
    'PrincipalAngleReport', 'SubspaceBasis', 'max_principal_angle',
    'principal_angles', 'top_eigvec_subspace', 'ConstantPredictor', 'mse',
    'CvResult', 'ModelSpec', 'cross_validate', 'fold_assignment',
]
