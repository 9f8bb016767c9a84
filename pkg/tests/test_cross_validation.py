"""
TEST: evaluation/cross_validation.py

What we're testing:
    - Every row lands in exactly one test fold per repeat
    - Grid search picks the spec with the lowest inner-CV error
    - Summary has one row per (repeat, method)
    - Determinism under a fixed seed
    - n < folds raises CrossValidationError

How to run:
    pytest tests/test_cross_validation.py -v
"""

import os
import sys
from functools import partial

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from datasets.dataset import Dataset
from errors import CrossValidationError
from evaluation.cross_validation import ModelSpec, cross_validate, fold_assignment, select_spec
from evaluation.metrics import ConstantPredictor


class Shifted:
    """Training mean plus a fixed offset; offset 0 is the best choice."""

    def __init__(self, value):
        self.value = value

    def predict(self, X):
        return np.full(np.atleast_2d(X).shape[0], self.value)


def fit_shifted(data, offset):
    return Shifted(float(np.mean(data.y)) + offset)


def shifted_spec(offset, method="shift"):
    return ModelSpec(method, f"offset={offset:g}", partial(fit_shifted, offset=offset), {"offset": offset})


@pytest.fixture
def data():
    rng = np.random.default_rng(0)
    X = rng.random((40, 2))
    return Dataset(X, X[:, 0] + 0.1 * rng.normal(size=40))


# =============================================================================
# TEST 1: Fold assignment
# =============================================================================

def test_every_row_in_one_fold():
    assignment = fold_assignment(23, 5, seed=3)
    assert assignment.shape == (23,)
    assert set(assignment) == set(range(5))
    sizes = np.bincount(assignment)
    assert sizes.max() - sizes.min() <= 1


def test_fold_assignment_seeded():
    np.testing.assert_array_equal(fold_assignment(30, 10, seed=1), fold_assignment(30, 10, seed=1))
    assert not np.array_equal(fold_assignment(30, 10, seed=1), fold_assignment(30, 10, seed=2))


# =============================================================================
# TEST 2: Grid selection
# =============================================================================

def test_select_spec_prefers_zero_offset(data):
    specs = [shifted_spec(1.0), shifted_spec(0.0), shifted_spec(-0.5)]
    best, score = select_spec(data, specs, inner_folds=3, seed=0)
    assert best.label == "offset=0"
    assert score > 0


def test_single_spec_skips_inner_search(data):
    best, score = select_spec(data, [shifted_spec(2.0)], inner_folds=3, seed=0)
    assert best.params["offset"] == 2.0
    assert np.isnan(score)


def test_cross_validate_selects_from_grid(data):
    grid = [shifted_spec(o) for o in (0.0, 0.5, 1.0)] + [ModelSpec("const", "mean", ConstantPredictor.fit)]
    result = cross_validate(data, grid, folds=5, repeats=2, seed=0, n_jobs=1)
    frame = result.to_frame()
    assert len(frame) == 5 * 2 * 2
    assert set(frame.loc[frame.method == "shift", "selected"]) <= {"offset=0", "offset=0.5", "offset=1"}
    assert (frame.loc[frame.method == "shift", "selected"] == "offset=0").all()


# =============================================================================
# TEST 3: Summary and determinism
# =============================================================================

def test_summary_has_one_row_per_repeat_and_method(data):
    grid = [shifted_spec(0.0), shifted_spec(0.3), ModelSpec("const", "mean", ConstantPredictor.fit)]
    summary = cross_validate(data, grid, folds=4, repeats=3, seed=1, n_jobs=1).summary()
    assert len(summary) == 3 * 2
    assert set(summary.columns) >= {"repeat", "method", "mean_mse", "selected"}
    assert (summary.mean_mse > 0).all()


def test_cross_validate_deterministic(data):
    grid = [shifted_spec(0.0), shifted_spec(0.2)]
    a = cross_validate(data, grid, folds=5, repeats=2, seed=4, n_jobs=1).to_frame()
    b = cross_validate(data, grid, folds=5, repeats=2, seed=4, n_jobs=1).to_frame()
    assert a.equals(b)


def test_repeats_shuffle_differently(data):
    grid = [ModelSpec("const", "mean", ConstantPredictor.fit)]
    frame = cross_validate(data, grid, folds=5, repeats=2, seed=0, n_jobs=1).to_frame()
    first = frame[frame.repeat == 0].test_mse.to_numpy()
    second = frame[frame.repeat == 1].test_mse.to_numpy()
    assert not np.array_equal(first, second)


# =============================================================================
# TEST 4: Errors
# =============================================================================

def test_fewer_rows_than_folds(data):
    with pytest.raises(CrossValidationError) as err:
        cross_validate(data.subset(range(5)), [shifted_spec(0.0)], folds=10, repeats=1)
    assert err.value.category == "cv"


def test_one_fold_rejected(data):
    with pytest.raises(CrossValidationError):
        cross_validate(data, [shifted_spec(0.0)], folds=1, repeats=1)


def test_empty_grid_rejected(data):
    with pytest.raises(CrossValidationError):
        cross_validate(data, [], folds=5, repeats=1)
