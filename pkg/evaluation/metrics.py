"""
Metrics - evaluation/metrics.py

Test-set MSE for anything with a predict(X) method, and the constant
predictor used as a reference fit.
"""

import numpy as np

from datasets.dataset import Dataset
from errors import DatasetError


def mse(predictor, test: Dataset) -> float:
    """Mean squared residual of predictor.predict on the test set."""
    if test.n == 0:
        raise DatasetError("MSE needs a nonempty test set")
    residuals = np.asarray(predictor.predict(test.X), dtype=float) - test.y
    return float(np.mean(residuals ** 2))


class ConstantPredictor:
    """Predicts one value everywhere (the training mean when fitted)."""

    def __init__(self, value: float = 0.0):
        self.value = float(value)

    @classmethod
    def fit(cls, data: Dataset) -> "ConstantPredictor":
        return cls(float(np.mean(data.y)) if data.n else 0.0)

    def predict(self, X) -> np.ndarray:
        return np.full(np.atleast_2d(X).shape[0], self.value)
