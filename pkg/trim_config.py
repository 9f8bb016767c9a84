"""
TrIM Configuration - Central place for estimator and experiment defaults
Change these values to adjust forests, EGOP estimation and experiment grids
"""

import os

from logger_config import get_logger
logger = get_logger(__name__)

SCRIPT_DIR = os.path.dirname(os.path.abspath(__file__))

# =============================================================================
# FOREST PARAMETERS
# =============================================================================

LIFETIME = 5.0
N_TREES = 10

# =============================================================================
# EGOP / ITERATION PARAMETERS
# =============================================================================

STEP = 0.1
N_ITERATIONS = 2

# Indicator of populated shifted cells: "forest" or "off"
INDICATOR_MODE = "forest"

# Evaluation points for the EGOP average: "train" or "heldout"
EVAL_POINT_MODE = "train"
HELDOUT_FRACTION = 0.5

# =============================================================================
# PARAMETER SCHEDULE CONSTANTS (lambda_n, M_n, t_n)
# =============================================================================

SCHEDULE_C_LIFETIME = 1.0
SCHEDULE_C_TREES = 1.0
SCHEDULE_C_STEP = 1.0

# =============================================================================
# SYNTHETIC / SEIR STUDY DEFAULTS
# =============================================================================

NOISE_SD = 0.1
TEST_SIZE = 1000
N_GRID = (100, 200, 400, 800, 1600, 3200)
LAMBDA_GRID = (0.0, 1.0, 2.0, 3.0, 4.0, 5.0)
SEEDS = tuple(range(10))
N_MC = 100_000
QUADRATURE_POINTS = 8

# Subspace dimension compared against the quadrature EGOP of R0
SEIR_SUBSPACE_DIM = 1

# =============================================================================
# CROSS-VALIDATION BENCHMARK
# =============================================================================

CV_FOLDS = 10
CV_REPEATS = 15
CV_INNER_FOLDS = 3
CV_LAMBDA_GRID = (1.0, 2.0, 3.0, 4.0, 5.0)
CV_STEP_GRID = (0.1, 0.2, 0.5)
CV_MAX_ITERATIONS = 2

# =============================================================================
# PERSISTENCE
# =============================================================================

MODEL_FORMAT_VERSION = 1
RESULTS_DIR = os.path.join(SCRIPT_DIR, "results")
MODELS_DIR = os.path.join(SCRIPT_DIR, "models")

# =============================================================================
# SYSTEM BEHAVIOR
# =============================================================================

N_JOBS_ENV = "TRIM_N_JOBS"
DEFAULT_N_JOBS = 1


# =============================================================================
# HELPER FUNCTIONS
# =============================================================================

def load_n_jobs():
    """Worker count for tree growth and experiment cells, read from TRIM_N_JOBS."""
    raw = os.environ.get(N_JOBS_ENV, "").strip()
    if not raw:
        return DEFAULT_N_JOBS
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {N_JOBS_ENV}={raw!r} - not an integer, using {DEFAULT_N_JOBS}")
        return DEFAULT_N_JOBS
    if value == 0 or value < -1:
        logger.warning(f"Ignoring {N_JOBS_ENV}={value} - must be positive or -1, using {DEFAULT_N_JOBS}")
        return DEFAULT_N_JOBS
    return value


def results_dir():
    os.makedirs(RESULTS_DIR, exist_ok=True)
    return RESULTS_DIR


def models_dir():
    os.makedirs(MODELS_DIR, exist_ok=True)
    return MODELS_DIR
