"""
Mondrian module for random partitions and forest regression.
"""

from .mondrian_tree import (
    AxisBox,
    MondrianNode,
    MondrianTree,
    expected_cell_bound,
    grow_tree,
    leaf_is_populated,
    predict_tree,
    sample_split,
    uniform_weights,
)
from .forest import MondrianForest, fit_forest, predict_forest
from .forest_codec import forest_from_dict, forest_to_dict

__all__ = [
    'AxisBox', 'MondrianNode', 'MondrianTree', 'MondrianForest',
    'expected_cell_bound', 'grow_tree', 'leaf_is_populated', 'predict_tree',
    'sample_split', 'uniform_weights', 'fit_forest', 'predict_forest',
    'forest_from_dict', 'forest_to_dict',
]
