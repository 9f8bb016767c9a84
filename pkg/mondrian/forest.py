"""
Mondrian Forest - mondrian/forest.py

Averages M independently grown Mondrian trees. Tree m draws from its own
random stream spawned from (seed, m), so a forest is reproducible from its
seed no matter how many workers grow it.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from datasets.dataset import Dataset
from errors import ConfigError, DimensionMismatch
from mondrian.mondrian_tree import (
    AxisBox,
    MondrianTree,
    check_weights,
    grow_tree,
    leaf_is_populated,
    predict_tree,
    uniform_weights,
)
from trim_config import load_n_jobs

from logger_config import get_logger
logger = get_logger(__name__)


@dataclass
class MondrianForest:
    trees: list
    lifetime: float
    dim: int
    dir_weights: np.ndarray
    seed: int

    @property
    def n_trees(self) -> int:
        return len(self.trees)

    def predict(self, X) -> np.ndarray:
        return predict_forest(self, X)

    def tree_predictions(self, X) -> np.ndarray:
        """(M, n) matrix of per-tree predictions."""
        return np.vstack([predict_tree(tree, X) for tree in self.trees])

    def all_populated(self, X) -> np.ndarray:
        """True where every tree routes the point to a leaf holding training data."""
        populated = leaf_is_populated(self.trees[0], X)
        for tree in self.trees[1:]:
            populated &= leaf_is_populated(tree, X)
        return populated

    def split_counts(self) -> np.ndarray:
        """Internal nodes per input dimension, summed over trees."""
        return np.sum([tree.split_counts() for tree in self.trees], axis=0)

    def n_leaves(self) -> int:
        return int(sum(tree.n_leaves for tree in self.trees))


def tree_streams(seed: int, n_trees: int):
    """Independent generators derived deterministically from (seed, tree index)."""
    children = np.random.SeedSequence(seed).spawn(n_trees)
    return [np.random.default_rng(child) for child in children]


def fit_forest(data: Dataset, lifetime: float, n_trees: int, seed: int,
               dir_weights=None, root_box: Optional[AxisBox] = None,
               n_jobs: Optional[int] = None) -> MondrianForest:
    """
    Grow M Mondrian trees on `data`.

    The root cell is the bounding box of the training inputs unless
    `root_box` is given; uniform direction weights unless `dir_weights` is.
    """
    if n_trees < 1:
        raise ConfigError(f"A forest needs at least one tree, got {n_trees}")
    if lifetime < 0:
        raise ConfigError(f"Lifetime must be nonnegative, got {lifetime}")
    d = data.d
    weights = uniform_weights(d) if dir_weights is None else check_weights(dir_weights, d)
    box = AxisBox.bounding(data.X) if root_box is None else root_box
    if box.dim != d:
        raise DimensionMismatch(f"Root box has dimension {box.dim}, data has {d}")

    n_jobs = load_n_jobs() if n_jobs is None else n_jobs
    streams = tree_streams(seed, n_trees)
    if n_jobs == 1:
        trees = [grow_tree(data, box, lifetime, weights, rng) for rng in streams]
    else:
        trees = Parallel(n_jobs=n_jobs)(
            delayed(grow_tree)(data, box, lifetime, weights, rng) for rng in streams
        )

    forest = MondrianForest(trees=list(trees), lifetime=float(lifetime), dim=d,
                            dir_weights=weights, seed=int(seed))
    logger.info(f"Forest grown - {n_trees} trees, lifetime {lifetime:g}, "
                f"{forest.n_leaves()} leaves on {data.n} points (d={d})")
    return forest


def predict_forest(forest: MondrianForest, X) -> np.ndarray:
    """Arithmetic mean of the tree predictions."""
    if not forest.trees:
        raise ConfigError("Cannot predict with an empty forest")
    return np.mean(forest.tree_predictions(X), axis=0)
