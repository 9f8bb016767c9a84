"""
TEST: trim_config.py - Layer 1 (Core)

What we're testing:
    - Constants exist and have correct types/values
    - load_n_jobs() reads the worker count from the environment
    - load_n_jobs() falls back to the default on bad values
    - results_dir() / models_dir() create their directories

How to run:
    pytest tests/test_trim_config.py -v
"""

import os
import sys
from unittest.mock import patch

import pytest

# Add project root to path so we can import trim_config
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
import trim_config


# =============================================================================
# TEST 1: Constants exist and have correct types
# =============================================================================
# WHY: The experiment defaults are the study protocol. A typo here silently
#       changes every figure the harness reproduces.

def test_forest_defaults():
    """lambda = 5, M = 10 trees."""
    assert trim_config.LIFETIME == 5.0
    assert isinstance(trim_config.N_TREES, int)
    assert trim_config.N_TREES == 10


def test_egop_defaults():
    """t = 0.1 and two refinement rounds."""
    assert trim_config.STEP == pytest.approx(0.1)
    assert trim_config.N_ITERATIONS == 2
    assert trim_config.INDICATOR_MODE in ("forest", "off")
    assert trim_config.EVAL_POINT_MODE in ("train", "heldout")
    assert 0.0 < trim_config.HELDOUT_FRACTION < 1.0


def test_sample_size_grid():
    """n doubles from 100 to 3200."""
    assert trim_config.N_GRID == (100, 200, 400, 800, 1600, 3200)


def test_lifetime_grid_starts_at_zero():
    """The lifetime sweep includes lambda = 0 and ends at 5."""
    assert trim_config.LAMBDA_GRID[0] == 0.0
    assert trim_config.LAMBDA_GRID[-1] == 5.0


def test_cv_grid():
    """10 folds x 15 repeats, lambda in 1..5, t in {0.1, 0.2, 0.5}, K <= 2."""
    assert trim_config.CV_FOLDS == 10
    assert trim_config.CV_REPEATS == 15
    assert trim_config.CV_LAMBDA_GRID == (1.0, 2.0, 3.0, 4.0, 5.0)
    assert trim_config.CV_STEP_GRID == (0.1, 0.2, 0.5)
    assert trim_config.CV_MAX_ITERATIONS == 2


def test_schedule_constants_positive():
    for c in (trim_config.SCHEDULE_C_LIFETIME, trim_config.SCHEDULE_C_TREES, trim_config.SCHEDULE_C_STEP):
        assert c > 0


def test_seeds_are_ten():
    assert trim_config.SEEDS == tuple(range(10))


# =============================================================================
# TEST 2: load_n_jobs() - reading the worker count
# =============================================================================

def test_load_n_jobs_default_when_unset():
    """No env var -> default worker count."""
    with patch.dict(os.environ, {}, clear=True):
        assert trim_config.load_n_jobs() == trim_config.DEFAULT_N_JOBS


def test_load_n_jobs_reads_env():
    with patch.dict(os.environ, {trim_config.N_JOBS_ENV: "4"}):
        assert trim_config.load_n_jobs() == 4


def test_load_n_jobs_accepts_all_cores():
    """-1 means every core in joblib."""
    with patch.dict(os.environ, {trim_config.N_JOBS_ENV: "-1"}):
        assert trim_config.load_n_jobs() == -1


def test_load_n_jobs_strips_whitespace():
    with patch.dict(os.environ, {trim_config.N_JOBS_ENV: "  3 \n"}):
        assert trim_config.load_n_jobs() == 3


@pytest.mark.parametrize("raw", ["four", "0", "-2", "1.5"])
def test_load_n_jobs_rejects_bad_values(raw):
    """Malformed or meaningless values fall back to the default."""
    with patch.dict(os.environ, {trim_config.N_JOBS_ENV: raw}):
        assert trim_config.load_n_jobs() == trim_config.DEFAULT_N_JOBS


# =============================================================================
# TEST 3: Output directories
# =============================================================================

def test_results_dir_is_created(tmp_path):
    target = tmp_path / "results"
    with patch.object(trim_config, "RESULTS_DIR", str(target)):
        assert trim_config.results_dir() == str(target)
    assert target.is_dir()


def test_models_dir_is_created(tmp_path):
    target = tmp_path / "nested" / "models"
    with patch.object(trim_config, "MODELS_DIR", str(target)):
        assert trim_config.models_dir() == str(target)
    assert target.is_dir()
