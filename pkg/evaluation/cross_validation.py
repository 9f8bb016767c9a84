"""
Cross-Validation - evaluation/cross_validation.py

Repeated K-fold benchmark with grid search inside each training fold.

For every repeat the rows are shuffled into `folds` test folds. For every
method, each candidate spec is scored by its mean validation MSE over an
inner K-fold split of the training fold; the best spec (first on ties) is
refitted on the whole training fold and scored on the test fold. A repeat's
result for a method is the mean test MSE over its folds.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from sklearn.model_selection import KFold

from datasets.dataset import Dataset
from errors import CrossValidationError
from evaluation.metrics import mse
from trim_config import CV_FOLDS, CV_INNER_FOLDS, CV_REPEATS, load_n_jobs

from logger_config import get_logger
logger = get_logger(__name__)


@dataclass(frozen=True)
class ModelSpec:
    """One grid cell: `fit` maps a training Dataset to an object with predict(X)."""

    method: str
    label: str
    fit: Callable
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FoldRecord:
    repeat: int
    fold: int
    method: str
    selected: str
    selection_score: float
    test_mse: float


@dataclass
class CvResult:
    records: list

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([record.__dict__ for record in self.records])

    def summary(self) -> pd.DataFrame:
        """One row per (repeat, method): mean test MSE over folds and the most frequent selection."""
        frame = self.to_frame()
        grouped = frame.groupby(["repeat", "method"], sort=True)
        return grouped.agg(
            mean_mse=("test_mse", "mean"),
            selected=("selected", lambda s: s.value_counts().sort_index().idxmax()),
        ).reset_index()


def repeat_seed(seed: int, repeat: int) -> int:
    return int(np.random.SeedSequence((seed, repeat)).generate_state(1)[0])


def fold_assignment(n: int, folds: int, seed: int) -> np.ndarray:
    """Test-fold index of every row for one shuffled K-fold split."""
    assignment = np.empty(n, dtype=int)
    splitter = KFold(n_splits=folds, shuffle=True, random_state=seed)
    for fold, (_, test_idx) in enumerate(splitter.split(np.zeros((n, 1)))):
        assignment[test_idx] = fold
    return assignment


def select_spec(train: Dataset, specs, inner_folds: int, seed: int):
    """Best spec by inner-CV validation MSE; returns (spec, score)."""
    if len(specs) == 1:
        return specs[0], float("nan")
    k = min(inner_folds, train.n)
    if k < 2:
        raise CrossValidationError(f"Grid search needs at least 2 training rows, got {train.n}")
    splitter = KFold(n_splits=k, shuffle=True, random_state=seed)
    splits = list(splitter.split(train.X))
    best, best_score = None, np.inf
    for spec in specs:
        score = float(np.mean([
            mse(spec.fit(train.subset(fit_idx)), train.subset(val_idx)) for fit_idx, val_idx in splits
        ]))
        if score < best_score:
            best, best_score = spec, score
    return best, best_score


def _run_repeat(data, groups, folds, inner_folds, seed, repeat):
    records = []
    rseed = repeat_seed(seed, repeat)
    splitter = KFold(n_splits=folds, shuffle=True, random_state=rseed)
    for fold, (train_idx, test_idx) in enumerate(splitter.split(data.X)):
        if train_idx.size == 0 or test_idx.size == 0:
            raise CrossValidationError(f"Fold {fold} of repeat {repeat} has an empty train or test part")
        train, test = data.subset(train_idx), data.subset(test_idx)
        for method, specs in groups.items():
            spec, score = select_spec(train, specs, inner_folds, repeat_seed(rseed, fold))
            test_mse = mse(spec.fit(train), test)
            records.append(FoldRecord(repeat, fold, method, spec.label, score, test_mse))
    logger.debug(f"CV repeat {repeat} done - {len(records)} fold records")
    return records


def cross_validate(data: Dataset, grid, folds: int = CV_FOLDS, repeats: int = CV_REPEATS,
                   seed: int = 0, inner_folds: int = CV_INNER_FOLDS, n_jobs=None) -> CvResult:
    if folds < 2:
        raise CrossValidationError(f"Need at least 2 folds, got {folds}")
    if data.n < folds:
        raise CrossValidationError(f"Need at least as many rows ({data.n}) as folds ({folds})")
    if not grid:
        raise CrossValidationError("Model grid is empty")

    groups = {}
    for spec in grid:
        groups.setdefault(spec.method, []).append(spec)

    n_jobs = load_n_jobs() if n_jobs is None else n_jobs
    per_repeat = Parallel(n_jobs=n_jobs)(
        delayed(_run_repeat)(data, groups, folds, inner_folds, seed, r) for r in range(repeats)
    )
    records = [record for chunk in per_repeat for record in chunk]
    logger.info(f"Cross-validation done - {repeats} repeats x {folds} folds, methods {list(groups)}")
    return CvResult(records)
