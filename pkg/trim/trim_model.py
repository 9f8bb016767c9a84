"""
TrIM Estimator - trim/trim_model.py

Transformed forests and the alternating refinement loop built on them.

    fit_transformed  grow a Mondrian forest on {(A x_i, y_i)}; predict f(A x)
    fit_trim         K rounds of: fit with the current transform, re-estimate
                     the EGOP of the fitted model, renormalize it into A
    fit_weighted     K rounds of: fit with the current direction weights,
                     re-estimate the importance weights omega

Gradients during the loop are taken in the original coordinates: the model
shifts x by +/- t e_j and only then applies A. Round k of a run seeded with s
grows its forest from round_seed(s, k), and round 0 uses s itself, so a single
round reproduces the plain forest with the same seed.
"""

import dataclasses
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from datasets.dataset import Dataset
from egop.gradient import (
    EgopEstimate,
    ImportanceWeights,
    IndicatorMode,
    gradient_matrix,
    outer_product_average,
    weights_from_gradients,
)
from egop.transform import TransformMatrix, normalize_matrix, normalize_transform
from errors import ConfigError, DatasetError, DegenerateEgop, DimensionMismatch
from mondrian.forest import MondrianForest, fit_forest
from trim_config import (
    EVAL_POINT_MODE,
    HELDOUT_FRACTION,
    INDICATOR_MODE,
    LIFETIME,
    N_ITERATIONS,
    N_TREES,
    STEP,
)

from logger_config import get_logger
logger = get_logger(__name__)


class TrimMode(str, Enum):
    TRANSFORM = "transform"
    REWEIGHT = "reweight"


class EvalPointMode(str, Enum):
    TRAIN = "train"
    HELDOUT = "heldout"


def _parse_enum(enum_cls, value, what: str):
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(str(value))
    except ValueError:
        choices = ", ".join(repr(member.value) for member in enum_cls)
        raise ConfigError(f"Unknown {what} {value!r}; use one of {choices}") from None


# =============================================================================
# CONFIG
# =============================================================================

@dataclass(frozen=True)
class TrimConfig:
    lifetime: float = LIFETIME
    n_trees: int = N_TREES
    step: float = STEP
    n_iterations: int = N_ITERATIONS
    mode: TrimMode = TrimMode.TRANSFORM
    indicator_mode: IndicatorMode = IndicatorMode(INDICATOR_MODE)
    eval_point_mode: EvalPointMode = EvalPointMode(EVAL_POINT_MODE)
    seed: int = 0
    heldout_fraction: float = HELDOUT_FRACTION

    def __post_init__(self):
        object.__setattr__(self, "mode", _parse_enum(TrimMode, self.mode, "mode"))
        object.__setattr__(self, "indicator_mode", IndicatorMode.parse(self.indicator_mode))
        object.__setattr__(self, "eval_point_mode",
                           _parse_enum(EvalPointMode, self.eval_point_mode, "eval-point mode"))

    def validate(self) -> "TrimConfig":
        if not np.isfinite(self.lifetime) or self.lifetime < 0:
            raise ConfigError(f"Lifetime must be a finite nonnegative number, got {self.lifetime}")
        if int(self.n_trees) != self.n_trees or self.n_trees < 1:
            raise ConfigError(f"Number of trees must be a positive integer, got {self.n_trees}")
        if not np.isfinite(self.step) or self.step <= 0:
            raise ConfigError(f"Step size must be positive, got {self.step}")
        if int(self.n_iterations) != self.n_iterations or self.n_iterations < 1:
            raise ConfigError(f"Iterations must be a positive integer, got {self.n_iterations}")
        if not 0.0 < self.heldout_fraction < 1.0:
            raise ConfigError(f"Heldout fraction must lie in (0, 1), got {self.heldout_fraction}")
        return self

    def replace(self, **changes) -> "TrimConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "lifetime": float(self.lifetime),
            "n_trees": int(self.n_trees),
            "step": float(self.step),
            "n_iterations": int(self.n_iterations),
            "mode": self.mode.value,
            "indicator_mode": self.indicator_mode.value,
            "eval_point_mode": self.eval_point_mode.value,
            "seed": int(self.seed),
            "heldout_fraction": float(self.heldout_fraction),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "TrimConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        return cls(**{key: value for key, value in payload.items() if key in known})


# =============================================================================
# MODEL
# =============================================================================

@dataclass
class TrimModel:
    """A forest trained on transformed inputs; queries are mapped through A first."""

    transform: TransformMatrix
    forest: MondrianForest
    config: TrimConfig
    iteration: int = 0
    egop: Optional[EgopEstimate] = None
    weights: Optional[ImportanceWeights] = None
    flags: tuple = field(default=())

    @property
    def dim(self) -> int:
        return self.transform.dim

    def predict(self, X) -> np.ndarray:
        return self.forest.predict(self.transform.apply(X))

    def all_populated(self, X) -> np.ndarray:
        return self.forest.all_populated(self.transform.apply(X))


def round_seed(seed: int, round_index: int) -> int:
    if round_index == 0:
        return int(seed)
    return int(np.random.SeedSequence((int(seed), round_index)).generate_state(1)[0])


def _resolve_transform(transform, d: int):
    """TransformMatrix for `transform` plus any fallback flags."""
    if transform is None:
        return TransformMatrix.identity(d), ()
    if isinstance(transform, EgopEstimate):
        try:
            return normalize_transform(transform), ()
        except DegenerateEgop as e:
            logger.warning(f"{e} - training on the identity transform instead")
            return TransformMatrix.identity(d), ("degenerate_egop",)
    if not isinstance(transform, TransformMatrix):
        transform = TransformMatrix(np.asarray(transform, dtype=float))
    if transform.matrix.shape != (d, d):
        raise DimensionMismatch(f"Transform has shape {transform.matrix.shape}, data dimension is {d}")
    return transform, ()


def fit_transformed(data: Dataset, transform, config: TrimConfig, seed: Optional[int] = None,
                    dir_weights=None, n_jobs: Optional[int] = None) -> TrimModel:
    """
    Grow a forest on the transformed inputs A x_i.

    `transform` may be a TransformMatrix, a raw d x d array (used as is), an
    EgopEstimate (normalized here) or None for the identity. A zero EGOP
    falls back to the identity and flags the model.
    """
    config = config.validate()
    if data.n == 0:
        raise DatasetError("Cannot fit a forest on an empty dataset")
    transform, flags = _resolve_transform(transform, data.d)
    seed = config.seed if seed is None else seed
    transformed = data.with_inputs(transform.apply(data.X))
    forest = fit_forest(transformed, config.lifetime, config.n_trees, seed,
                        dir_weights=dir_weights, n_jobs=n_jobs)
    return TrimModel(transform=transform, forest=forest, config=config, flags=flags)


def egop_sample(data: Dataset, config: TrimConfig):
    """(fit data, EGOP evaluation points) for the configured eval-point mode."""
    if config.eval_point_mode is EvalPointMode.HELDOUT:
        if data.n < 2:
            raise DatasetError("Heldout evaluation needs at least 2 rows")
        fit_part, eval_part = data.split(config.heldout_fraction, config.seed)
        return fit_part, eval_part.X
    return data, data.X


def _estimate(model: TrimModel, eval_points, config: TrimConfig):
    grads = gradient_matrix(model, model, eval_points, config.step, config.indicator_mode)
    H = outer_product_average(grads)
    egop = EgopEstimate(matrix=H, step=float(config.step), n_eval=grads.shape[0],
                        indicator_mode=config.indicator_mode)
    return egop, grads


def fit_trim(data: Dataset, config: TrimConfig, n_jobs: Optional[int] = None) -> TrimModel:
    """
    Alternate K times between forest fitting and EGOP re-estimation.

    Returns the model of the last round carrying the EGOP estimated from it.
    """
    config = config.validate()
    if config.mode is not TrimMode.TRANSFORM:
        raise ConfigError(f"fit_trim needs mode 'transform', got {config.mode.value!r}")
    fit_data, eval_points = egop_sample(data, config)

    transform = TransformMatrix.identity(data.d)
    flags = []
    for k in range(config.n_iterations):
        # 1. Fit on the current transform (identity in the first round)
        model = fit_transformed(fit_data, transform, config, seed=round_seed(config.seed, k), n_jobs=n_jobs)

        # 2. Re-estimate the EGOP of the composed model f(A x)
        egop, _ = _estimate(model, eval_points, config)

        # 3. Renormalize it into the next transform
        try:
            transform = normalize_transform(egop)
        except DegenerateEgop as e:
            logger.warning(f"Round {k + 1}/{config.n_iterations}: {e} - continuing with the identity transform")
            transform = TransformMatrix.identity(data.d)
            if "degenerate_egop" not in flags:
                flags.append("degenerate_egop")
        logger.debug(f"Round {k + 1}/{config.n_iterations} - EGOP trace {np.trace(egop.matrix):.4g}")

    logger.info(f"TrIM fit done - {config.n_iterations} rounds, n={fit_data.n}, d={data.d}, "
                f"lambda={config.lifetime:g}, M={config.n_trees}, t={config.step:g}")
    return dataclasses.replace(model, iteration=config.n_iterations - 1, egop=egop,
                               flags=tuple(flags))


def fit_weighted(data: Dataset, config: TrimConfig, n_jobs: Optional[int] = None) -> TrimModel:
    """
    Alternate K times between forest fitting with direction weights and
    importance-weight re-estimation. The first round grows a plain forest;
    the returned model carries the weights estimated from the last one.
    """
    config = config.validate()
    if config.mode is not TrimMode.REWEIGHT:
        raise ConfigError(f"fit_weighted needs mode 'reweight', got {config.mode.value!r}")
    fit_data, eval_points = egop_sample(data, config)

    dir_weights = None
    flags = []
    for k in range(config.n_iterations):
        model = fit_transformed(fit_data, None, config, seed=round_seed(config.seed, k),
                                dir_weights=dir_weights, n_jobs=n_jobs)
        egop, grads = _estimate(model, eval_points, config)
        weights = weights_from_gradients(grads)
        if weights.uniform_fallback and "uniform_weights" not in flags:
            flags.append("uniform_weights")
        dir_weights = weights.normalized
        logger.debug(f"Round {k + 1}/{config.n_iterations} - weights {np.round(weights.normalized, 4).tolist()}")

    logger.info(f"Weighted Mondrian fit done - {config.n_iterations} rounds, n={fit_data.n}, d={data.d}")
    return dataclasses.replace(model, iteration=config.n_iterations - 1, egop=egop,
                               weights=weights, flags=tuple(flags))


def fit_model(data: Dataset, config: TrimConfig, n_jobs: Optional[int] = None) -> TrimModel:
    """Dispatch on config.mode."""
    if config.mode is TrimMode.REWEIGHT:
        return fit_weighted(data, config, n_jobs=n_jobs)
    return fit_trim(data, config, n_jobs=n_jobs)


def oracle_transform(truth) -> TransformMatrix:
    """Normalized true EGOP. Accepts an EgopEstimate, a d x d array or a ScenarioTruth."""
    if hasattr(truth, "true_egop_estimator"):
        truth = truth.true_egop_estimator()
    if isinstance(truth, EgopEstimate):
        return normalize_transform(truth)
    return TransformMatrix(normalize_matrix(truth))
