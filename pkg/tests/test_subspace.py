"""
TEST: evaluation/subspace.py and evaluation/metrics.py

What we're testing:
    - principal_angles() on identical / orthogonal / pi/4 fixtures
    - Invariance under a change of basis
    - Shape and rank errors
    - top_eigvec_subspace() ordering, sign convention and tie flag
    - mse() and the constant predictor

How to run:
    pytest tests/test_subspace.py -v
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from datasets.dataset import Dataset
from errors import ConfigError, DatasetError, DimensionMismatch, RankDeficientBasis
from evaluation.metrics import ConstantPredictor, mse
from evaluation.subspace import (
    SubspaceBasis,
    max_principal_angle,
    principal_angles,
    top_eigvec_subspace,
)


# =============================================================================
# TEST 1: Principal angles
# =============================================================================

def test_identical_subspaces_have_zero_angles():
    U = np.random.default_rng(0).normal(size=(5, 2))
    np.testing.assert_allclose(principal_angles(U, U).angles, [0.0, 0.0], atol=1e-8)


def test_orthogonal_lines():
    assert max_principal_angle(np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])) == pytest.approx(np.pi / 2, abs=1e-8)


def test_quarter_pi():
    assert max_principal_angle(np.array([[1.0], [0.0]]), np.array([[1.0], [1.0]])) == pytest.approx(np.pi / 4, abs=1e-8)


def test_planes_sharing_a_line():
    """span(e1, e2) vs span(e1, e3): angles (0, pi/2)."""
    U = np.eye(3)[:, [0, 1]]
    W = np.eye(3)[:, [0, 2]]
    np.testing.assert_allclose(principal_angles(U, W).angles, [0.0, np.pi / 2], atol=1e-8)


def test_angles_ascending():
    rng = np.random.default_rng(1)
    angles = principal_angles(rng.normal(size=(6, 3)), rng.normal(size=(6, 3))).angles
    assert np.all(np.diff(angles) >= 0)
    assert np.all((angles >= 0) & (angles <= np.pi / 2))


@pytest.mark.parametrize("seed", range(5))
def test_change_of_basis_invariance(seed):
    rng = np.random.default_rng(seed)
    U = rng.normal(size=(5, 2))
    W = rng.normal(size=(5, 2))
    R = rng.normal(size=(2, 2)) + 3 * np.eye(2)
    np.testing.assert_allclose(principal_angles(U @ R, W).angles, principal_angles(U, W).angles, atol=1e-8)


def test_symmetric_in_arguments():
    rng = np.random.default_rng(6)
    U, W = rng.normal(size=(4, 2)), rng.normal(size=(4, 2))
    np.testing.assert_allclose(principal_angles(U, W).angles, principal_angles(W, U).angles, atol=1e-10)


def test_shape_mismatch_rejected():
    with pytest.raises(DimensionMismatch):
        principal_angles(np.ones((4, 2)), np.ones((4, 1)))
    with pytest.raises(DimensionMismatch):
        principal_angles(np.ones((4, 1)), np.ones((3, 1)))


def test_rank_deficient_basis_rejected():
    U = np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]])
    with pytest.raises(RankDeficientBasis):
        principal_angles(U, np.eye(3)[:, :2])


def test_zero_basis_rejected():
    with pytest.raises(RankDeficientBasis):
        principal_angles(np.zeros((3, 1)), np.eye(3)[:, :1])


# =============================================================================
# TEST 2: Top eigenvector subspace
# =============================================================================

def test_top_eigvecs_of_diagonal():
    basis = top_eigvec_subspace(np.diag([1.0, 3.0, 2.0]), 2)
    assert basis.k == 2 and basis.d == 3
    np.testing.assert_allclose(np.abs(basis.columns[:, 0]), [0.0, 1.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(np.abs(basis.columns[:, 1]), [0.0, 0.0, 1.0], atol=1e-12)
    assert not basis.ill_defined


def test_largest_entry_is_positive():
    v = np.array([0.2, -0.9, 0.3])
    basis = top_eigvec_subspace(np.outer(v, v), 1)
    column = basis.columns[:, 0]
    assert column[np.argmax(np.abs(column))] > 0
    assert max_principal_angle(basis, v) == pytest.approx(0.0, abs=1e-8)


def test_columns_orthonormal():
    G = np.random.default_rng(2).normal(size=(5, 5))
    C = top_eigvec_subspace(G @ G.T, 3).columns
    np.testing.assert_allclose(C.T @ C, np.eye(3), atol=1e-10)


def test_tied_eigenvalues_flagged():
    basis = top_eigvec_subspace(np.diag([1.0, 1.0, 0.0]), 1)
    assert basis.ill_defined
    assert "eigenvalue_tie" in basis.flags


def test_full_dimension_never_flagged():
    assert not top_eigvec_subspace(np.eye(3), 3).ill_defined


@pytest.mark.parametrize("k", [0, 4])
def test_subspace_dimension_range(k):
    with pytest.raises(ConfigError):
        top_eigvec_subspace(np.eye(3), k)


def test_basis_accepts_vector():
    assert SubspaceBasis(np.array([1.0, 0.0])).columns.shape == (2, 1)


# =============================================================================
# TEST 3: MSE
# =============================================================================

def test_mse_of_constant_predictor():
    data = Dataset(np.zeros((4, 1)), np.array([1.0, 2.0, 3.0, 4.0]))
    model = ConstantPredictor.fit(data)
    assert model.value == 2.5
    assert mse(model, data) == pytest.approx(np.var(data.y))


def test_mse_needs_test_points():
    with pytest.raises(DatasetError):
        mse(ConstantPredictor(0.0), Dataset(np.zeros((0, 1)), np.zeros(0)))
