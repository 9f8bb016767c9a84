"""
Dataset - datasets/dataset.py

Container for a regression sample D_n = {(x_i, y_i)}: an n x d input
matrix, n labels and optional feature names.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from errors import DatasetError


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    feature_names: Optional[tuple] = field(default=None)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if X.ndim == 1:
            X = X.reshape(-1, 1) if X.size else X.reshape(0, 0)
        if X.ndim != 2:
            raise DatasetError(f"X must be a 2-d array, got shape {X.shape}")
        if X.shape[0] != y.shape[0]:
            raise DatasetError(f"Row counts differ: X has {X.shape[0]} rows, y has {y.shape[0]}")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise DatasetError("Dataset entries must be finite")
        names = self.feature_names
        if names is not None:
            names = tuple(str(name) for name in names)
            if len(names) != X.shape[1]:
                raise DatasetError(f"{len(names)} feature names for {X.shape[1]} columns")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", names)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def subset(self, indices: Sequence[int]) -> "Dataset":
        indices = np.asarray(indices, dtype=int)
        return Dataset(self.X[indices], self.y[indices], self.feature_names)

    def with_inputs(self, X: np.ndarray) -> "Dataset":
        """Same labels, replaced inputs (used for transformed data sets)."""
        return Dataset(X, self.y, None)

    def split(self, fraction: float, seed: int):
        """Shuffle with `seed` and cut into (first, second) with `fraction` of rows in the second part."""
        if not 0.0 < fraction < 1.0:
            raise DatasetError(f"Split fraction must lie in (0, 1), got {fraction}")
        order = np.random.default_rng(seed).permutation(self.n)
        n_second = int(round(self.n * fraction))
        n_second = min(max(n_second, 1), self.n - 1)
        return self.subset(order[n_second:]), self.subset(order[:n_second])
