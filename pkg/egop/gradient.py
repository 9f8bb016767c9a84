"""
EGOP Estimation - egop/gradient.py

Symmetric difference-quotient gradients of a fitted predictor and the
averaged outer products built from them:

    g_j(x) = (f(x + t e_j) - f(x - t e_j)) / (2 t) * 1[E_j(x)]
    H      = (1/n) sum_i g(x_i) g(x_i)^T
    omega  = (1/n) sum_i g(x_i)^2          (the diagonal of H)

E_j(x) holds when every tree of the forest routes both shifted points to a
populated leaf. With indicator mode "off" the quotient is used as is.

`estimator` is anything with predict(X) -> (n,) array; `forest` anything
with all_populated(X) -> (n,) bool array, queried in the same coordinates
as the estimator.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from errors import ConfigError, DimensionMismatch

from logger_config import get_logger
logger = get_logger(__name__)


class IndicatorMode(str, Enum):
    FOREST_ALL_POPULATED = "forest"
    OFF = "off"

    @classmethod
    def parse(cls, value) -> "IndicatorMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value))
        except ValueError:
            raise ConfigError(f"Unknown indicator mode {value!r}; use 'forest' or 'off'") from None


@dataclass(frozen=True)
class EgopEstimate:
    matrix: np.ndarray
    step: float
    n_eval: int
    indicator_mode: IndicatorMode = IndicatorMode.FOREST_ALL_POPULATED

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def to_dict(self) -> dict:
        return {
            "matrix": [[float(v) for v in row] for row in self.matrix],
            "step": float(self.step),
            "n_eval": int(self.n_eval),
            "indicator_mode": IndicatorMode.parse(self.indicator_mode).value,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "EgopEstimate":
        return cls(
            matrix=np.asarray(payload["matrix"], dtype=float),
            step=float(payload["step"]),
            n_eval=int(payload["n_eval"]),
            indicator_mode=IndicatorMode.parse(payload["indicator_mode"]),
        )


@dataclass(frozen=True)
class ImportanceWeights:
    omega: np.ndarray
    normalized: np.ndarray
    flags: tuple = field(default=())

    @property
    def uniform_fallback(self) -> bool:
        return "uniform_weights" in self.flags


# =============================================================================
# GRADIENTS
# =============================================================================

def _check_points(X, estimator_dim=None) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise DimensionMismatch(f"Evaluation points must be a 2-d array, got shape {X.shape}")
    if estimator_dim is not None and X.shape[1] != estimator_dim:
        raise DimensionMismatch(f"Points have dimension {X.shape[1]}, expected {estimator_dim}")
    return X


def gradient_matrix(estimator, forest, X, t: float,
                    indicator_mode=IndicatorMode.FOREST_ALL_POPULATED) -> np.ndarray:
    """(n, d) matrix whose row i is the difference-quotient gradient at X[i]."""
    if not t > 0:
        raise ConfigError(f"Step size must be positive, got {t}")
    mode = IndicatorMode.parse(indicator_mode)
    X = _check_points(X)
    n, d = X.shape
    if n == 0:
        return np.zeros((0, d))

    shifts = t * np.eye(d)
    # row (i, j) of the stacked arrays is x_i +/- t e_j
    plus = (X[:, None, :] + shifts[None, :, :]).reshape(n * d, d)
    minus = (X[:, None, :] - shifts[None, :, :]).reshape(n * d, d)
    f_plus = np.asarray(estimator.predict(plus), dtype=float).reshape(n, d)
    f_minus = np.asarray(estimator.predict(minus), dtype=float).reshape(n, d)
    grads = (f_plus - f_minus) / (2.0 * t)

    if mode is IndicatorMode.FOREST_ALL_POPULATED:
        if forest is None:
            raise ConfigError("Indicator mode 'forest' needs a forest to test populated cells")
        keep = (forest.all_populated(plus) & forest.all_populated(minus)).reshape(n, d)
        grads = np.where(keep, grads, 0.0)
    return grads


def approx_gradient(estimator, forest, x, t: float,
                    indicator_mode=IndicatorMode.FOREST_ALL_POPULATED) -> np.ndarray:
    """Difference-quotient gradient at a single point x (length-d vector)."""
    x = np.asarray(x, dtype=float).reshape(1, -1)
    return gradient_matrix(estimator, forest, x, t, indicator_mode)[0]


def outer_product_average(grads: np.ndarray) -> np.ndarray:
    n = grads.shape[0]
    H = grads.T @ grads / n
    return (H + H.T) / 2.0


def estimate_egop(estimator, forest, eval_points, t: float,
                  indicator_mode=IndicatorMode.FOREST_ALL_POPULATED) -> EgopEstimate:
    X = _check_points(eval_points)
    if X.shape[0] == 0:
        raise ConfigError("EGOP estimation needs at least one evaluation point")
    mode = IndicatorMode.parse(indicator_mode)
    grads = gradient_matrix(estimator, forest, X, t, mode)
    H = outer_product_average(grads)
    logger.debug(f"EGOP estimated - {X.shape[0]} points, t={t:g}, indicator={mode.value}, trace={np.trace(H):.4g}")
    return EgopEstimate(matrix=H, step=float(t), n_eval=X.shape[0], indicator_mode=mode)


def weights_from_gradients(grads: np.ndarray) -> ImportanceWeights:
    omega = np.mean(grads ** 2, axis=0)
    total = omega.sum()
    if total > 0:
        return ImportanceWeights(omega=omega, normalized=omega / total)
    d = grads.shape[1]
    logger.warning(f"Importance weights are all zero - falling back to uniform weights over {d} dims")
    return ImportanceWeights(omega=omega, normalized=np.full(d, 1.0 / d), flags=("uniform_weights",))


def importance_weights(estimator, forest, eval_points, t: float,
                       indicator_mode=IndicatorMode.FOREST_ALL_POPULATED) -> ImportanceWeights:
    X = _check_points(eval_points)
    if X.shape[0] == 0:
        raise ConfigError("Importance weights need at least one evaluation point")
    return weights_from_gradients(gradient_matrix(estimator, forest, X, t, indicator_mode))
