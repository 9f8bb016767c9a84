"""
Transform Normalization - egop/transform.py

A_n = d * H / ||H||_{2,1}, where ||.||_{2,1} sums the Euclidean norms of the
columns. The scaling keeps ||A_n||_{2,1} = d so a forest grown on A_n x uses
the same lifetime budget as one grown on x.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from egop.gradient import EgopEstimate
from errors import DegenerateEgop, DimensionMismatch


def l21_norm(A) -> float:
    return float(np.sum(np.linalg.norm(np.asarray(A, dtype=float), axis=0)))


@dataclass(frozen=True)
class TransformMatrix:
    matrix: np.ndarray
    source: Optional[EgopEstimate] = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, np.eye(self.dim)))

    def apply(self, X) -> np.ndarray:
        """Row-wise x -> A x."""
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.dim:
            raise DimensionMismatch(f"Points have dimension {X.shape[1]}, transform is {self.dim}x{self.dim}")
        if self.is_identity:
            return X
        return X @ self.matrix.T

    def to_dict(self) -> dict:
        return {
            "matrix": [[float(v) for v in row] for row in self.matrix],
            "source": None if self.source is None else self.source.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "TransformMatrix":
        source = payload.get("source")
        return cls(
            matrix=np.asarray(payload["matrix"], dtype=float),
            source=None if source is None else EgopEstimate.from_dict(source),
        )

    @classmethod
    def identity(cls, d: int) -> "TransformMatrix":
        return cls(matrix=np.eye(d))


def normalize_matrix(H) -> np.ndarray:
    H = np.asarray(H, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionMismatch(f"Transform source must be square, got shape {H.shape}")
    norm = l21_norm(H)
    if not norm > 0:
        raise DegenerateEgop("EGOP estimate is the zero matrix; the fitted predictor is constant")
    return H.shape[0] * H / norm


def normalize_transform(H: EgopEstimate) -> TransformMatrix:
    return TransformMatrix(matrix=normalize_matrix(H.matrix), source=H)
