"""
Mondrian Tree - mondrian/mondrian_tree.py

Grows one Mondrian partition of an axis-aligned box by the exponential-clock
recursion and answers leaf queries for the regression tree estimator.

Each cell runs d independent exponential clocks; clock j has rate
d * w_j * extent_j, so uniform direction weights w_j = 1/d give the plain
Mondrian process with rate |u_j - l_j|. The first clock to ring picks the
split dimension, the cut location is uniform on that side of the cell, and
recursion stops once the accumulated time would pass the lifetime. A cell
holding no training points is not split further, so every internal node holds
data. `full_box=True` keeps growing empty cells, giving the unconditioned
Mondrian process over the whole box.

Points are routed left when x[dim] < loc and right otherwise, both during
growth and at prediction time, so every point lands in exactly one leaf.
The tree is stored as flat node arrays for vectorized routing; `root`
rebuilds the recursive MondrianNode view.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from datasets.dataset import Dataset
from errors import ConfigError, DimensionMismatch

from logger_config import get_logger
logger = get_logger(__name__)

LEAF = -1


# =============================================================================
# GEOMETRY
# =============================================================================

@dataclass(frozen=True)
class AxisBox:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float).reshape(-1)
        upper = np.asarray(self.upper, dtype=float).reshape(-1)
        if lower.shape != upper.shape:
            raise DimensionMismatch(f"Box bounds differ in length: {lower.size} vs {upper.size}")
        if np.any(lower > upper):
            raise ConfigError("Box lower bounds must not exceed upper bounds")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return self.lower.size

    def extent(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, X) -> np.ndarray:
        X = np.atleast_2d(X)
        return np.all((X >= self.lower) & (X <= self.upper), axis=1)

    def cut(self, dim: int, loc: float):
        """Split into the [l, loc) and [loc, u] halves along `dim`."""
        left_upper = self.upper.copy()
        left_upper[dim] = loc
        right_lower = self.lower.copy()
        right_lower[dim] = loc
        return AxisBox(self.lower, left_upper), AxisBox(right_lower, self.upper)

    @classmethod
    def bounding(cls, X) -> "AxisBox":
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[0] == 0:
            return cls(np.zeros(X.shape[1]), np.zeros(X.shape[1]))
        return cls(X.min(axis=0), X.max(axis=0))

    @classmethod
    def unit(cls, d: int) -> "AxisBox":
        return cls(np.zeros(d), np.ones(d))


@dataclass
class MondrianNode:
    box: AxisBox
    birth_time: float
    count: int = 0
    label_sum: float = 0.0
    split_dim: Optional[int] = None
    split_loc: Optional[float] = None
    left: Optional["MondrianNode"] = None
    right: Optional["MondrianNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.split_dim is None


# =============================================================================
# SPLIT RACE
# =============================================================================

def uniform_weights(d: int) -> np.ndarray:
    return np.full(d, 1.0 / d)


def check_weights(dir_weights, d: int) -> np.ndarray:
    weights = np.asarray(dir_weights, dtype=float).reshape(-1)
    if weights.size != d:
        raise DimensionMismatch(f"Expected {d} direction weights, got {weights.size}")
    if np.any(weights < 0) or not np.isclose(weights.sum(), 1.0, atol=1e-9):
        raise ConfigError("Direction weights must be nonnegative and sum to 1")
    return weights


def sample_split(box: AxisBox, dir_weights: np.ndarray, rng: np.random.Generator):
    """
    Run the d exponential clocks of one cell.

    Returns (time, dim, loc); time is inf when every rate is zero, in which
    case dim and loc are None.
    """
    d = box.dim
    extent = box.extent()
    rates = d * dir_weights * extent
    uniforms = rng.random(d)
    with np.errstate(divide="ignore"):
        times = np.where(rates > 0, -np.log(uniforms) / np.where(rates > 0, rates, 1.0), np.inf)
    dim = int(np.argmin(times))
    time = float(times[dim])
    if not np.isfinite(time):
        return np.inf, None, None
    loc = float(rng.uniform(box.lower[dim], box.upper[dim]))
    return time, dim, loc


def expected_cell_bound(d: int, lifetime: float) -> float:
    """Upper bound (1 + lambda)^d on the expected number of cells of [0, 1]^d."""
    return (1.0 + lifetime) ** d


# =============================================================================
# TREE
# =============================================================================

class MondrianTree:
    """Flat-array Mondrian tree; node 0 is the root."""

    def __init__(self, dim, lifetime, split_dim, split_loc, left, right,
                 count, label_sum, birth_time, lower, upper):
        self.dim = int(dim)
        self.lifetime = float(lifetime)
        self.split_dim = np.asarray(split_dim, dtype=np.int64)
        self.split_loc = np.asarray(split_loc, dtype=float)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.count = np.asarray(count, dtype=np.int64)
        self.label_sum = np.asarray(label_sum, dtype=float)
        self.birth_time = np.asarray(birth_time, dtype=float)
        self.lower = np.asarray(lower, dtype=float).reshape(-1, self.dim)
        self.upper = np.asarray(upper, dtype=float).reshape(-1, self.dim)

    @property
    def n_nodes(self) -> int:
        return self.split_dim.size

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.split_dim == LEAF))

    def leaf_values(self) -> np.ndarray:
        """Leaf means, 0 for empty cells."""
        values = np.zeros(self.n_nodes)
        populated = self.count > 0
        values[populated] = self.label_sum[populated] / self.count[populated]
        return values

    def apply(self, X) -> np.ndarray:
        """Index of the leaf containing each row of X."""
        X = _as_queries(X, self.dim)
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.split_dim[node] != LEAF
        rows = np.arange(X.shape[0])
        while np.any(active):
            at = node[active]
            dims = self.split_dim[at]
            go_left = X[rows[active], dims] < self.split_loc[at]
            node[active] = np.where(go_left, self.left[at], self.right[at])
            active = self.split_dim[node] != LEAF
        return node

    def split_counts(self) -> np.ndarray:
        internal = self.split_dim[self.split_dim != LEAF]
        return np.bincount(internal, minlength=self.dim)

    @property
    def root(self) -> MondrianNode:
        return self._node(0)

    def _node(self, i: int) -> MondrianNode:
        node = MondrianNode(
            box=AxisBox(self.lower[i], self.upper[i]),
            birth_time=float(self.birth_time[i]),
            count=int(self.count[i]),
            label_sum=float(self.label_sum[i]),
        )
        if self.split_dim[i] != LEAF:
            node.split_dim = int(self.split_dim[i])
            node.split_loc = float(self.split_loc[i])
            node.left = self._node(int(self.left[i]))
            node.right = self._node(int(self.right[i]))
        return node

    @classmethod
    def from_root(cls, root: MondrianNode, lifetime: float) -> "MondrianTree":
        builder = _TreeBuilder(root.box.dim)
        stack = [(root, None, False)]
        while stack:
            node, parent, is_left = stack.pop()
            i = builder.add(node.box, node.birth_time, node.count, node.label_sum)
            if parent is not None:
                builder.link(parent, i, is_left)
            if not node.is_leaf:
                builder.set_split(i, node.split_dim, node.split_loc)
                stack.append((node.right, i, False))
                stack.append((node.left, i, True))
        return builder.build(lifetime)


class _TreeBuilder:
    def __init__(self, dim):
        self.dim = dim
        self.split_dim, self.split_loc = [], []
        self.left, self.right = [], []
        self.count, self.label_sum, self.birth_time = [], [], []
        self.lower, self.upper = [], []

    def add(self, box, birth_time, count, label_sum) -> int:
        self.split_dim.append(LEAF)
        self.split_loc.append(np.nan)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.count.append(count)
        self.label_sum.append(label_sum)
        self.birth_time.append(birth_time)
        self.lower.append(box.lower)
        self.upper.append(box.upper)
        return len(self.split_dim) - 1

    def set_split(self, i, dim, loc):
        self.split_dim[i] = dim
        self.split_loc[i] = loc

    def link(self, parent, child, is_left):
        if is_left:
            self.left[parent] = child
        else:
            self.right[parent] = child

    def build(self, lifetime) -> MondrianTree:
        return MondrianTree(
            self.dim, lifetime, self.split_dim, self.split_loc, self.left, self.right,
            self.count, self.label_sum, self.birth_time,
            np.array(self.lower).reshape(-1, self.dim), np.array(self.upper).reshape(-1, self.dim),
        )


def _as_queries(X, dim: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] != dim:
        raise DimensionMismatch(f"Query has dimension {X.shape[1]}, tree expects {dim}")
    return X


# =============================================================================
# GROWTH
# =============================================================================

def grow_tree(data: Dataset, root_box: AxisBox, lifetime: float, dir_weights,
              rng: np.random.Generator, full_box: bool = False) -> MondrianTree:
    """
    Grow a (weighted) Mondrian tree over `root_box` with the given lifetime.

    Leaves keep the count and label sum of the training points they contain.
    Empty data gives a single empty leaf. Cells without training points stay
    leaves unless `full_box` is set.
    """
    if lifetime < 0:
        raise ConfigError(f"Lifetime must be nonnegative, got {lifetime}")
    if data.n and data.d != root_box.dim:
        raise DimensionMismatch(f"Data has dimension {data.d}, box has {root_box.dim}")
    weights = check_weights(dir_weights, root_box.dim)

    builder = _TreeBuilder(root_box.dim)
    X, y = data.X, data.y
    all_rows = np.arange(data.n)

    if data.n == 0:
        builder.add(root_box, 0.0, 0, 0.0)
        return builder.build(lifetime)

    # (box, birth_time, rows, parent, is_left); depth-first, left child first
    stack = [(root_box, 0.0, all_rows, None, False)]
    while stack:
        box, birth, rows, parent, is_left = stack.pop()
        i = builder.add(box, birth, rows.size, float(y[rows].sum()) if rows.size else 0.0)
        if parent is not None:
            builder.link(parent, i, is_left)
        if rows.size == 0 and not full_box:
            continue

        time, dim, loc = sample_split(box, weights, rng)
        if birth + time > lifetime:
            continue

        builder.set_split(i, dim, loc)
        left_box, right_box = box.cut(dim, loc)
        go_left = X[rows, dim] < loc
        child_time = birth + time
        stack.append((right_box, child_time, rows[~go_left], i, False))
        stack.append((left_box, child_time, rows[go_left], i, True))

    tree = builder.build(lifetime)
    logger.debug(f"Tree grown - lifetime {lifetime:g}, {tree.n_leaves} leaves, {data.n} points")
    return tree


# =============================================================================
# QUERIES
# =============================================================================

def predict_tree(tree: MondrianTree, x) -> np.ndarray:
    """Leaf mean for each query row (0 in empty leaves); a single point gives a 1-element array."""
    return tree.leaf_values()[tree.apply(x)]


def leaf_is_populated(tree: MondrianTree, x) -> np.ndarray:
    return tree.count[tree.apply(x)] > 0
