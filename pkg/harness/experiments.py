"""
Experiment Runners - harness/experiments.py

Each runner expands its grid into independent cells, runs the cells in a
joblib pool and returns long-format rows (see harness/results.py).

    subspace_convergence  max principal angle of the top-k EGOP estimate vs n
    mse_vs_lifetime       baseline / proposed / oracle test MSE vs lambda
    trim_reiterate        angle and test MSE for K = 1 and K = 2, with baseline and oracle MSE
    ebola                 the reiteration study on the SEIR R0 response
    cv_bench              repeated K-fold MF vs TrIM with grid search

Within a cell the forest uses the cell seed; training and test samples use
seeds derived from it so that data and trees never share a stream.
"""

from functools import partial

import numpy as np
from joblib import Parallel, delayed

from datasets.dataset import Dataset
from datasets.scenarios import STUDY_SCENARIOS, sample_scenario, true_egop
from datasets.seir import REGIONS, sample_seir, seir_true_egop
from errors import ConfigError
from evaluation.cross_validation import ModelSpec, cross_validate
from evaluation.metrics import mse
from evaluation.subspace import max_principal_angle, top_eigvec_subspace
from harness.results import result_row
from trim.trim_model import TrimConfig, fit_transformed, fit_trim, oracle_transform
from trim_config import (
    CV_FOLDS,
    CV_LAMBDA_GRID,
    CV_MAX_ITERATIONS,
    CV_REPEATS,
    CV_STEP_GRID,
    LAMBDA_GRID,
    LIFETIME,
    N_GRID,
    N_TREES,
    QUADRATURE_POINTS,
    SEEDS,
    SEIR_SUBSPACE_DIM,
    STEP,
    TEST_SIZE,
    load_n_jobs,
)

from logger_config import get_logger
logger = get_logger(__name__)

EXPERIMENTS = ("subspace_convergence", "mse_vs_lifetime", "trim_reiterate", "ebola", "cv_bench")


def derived_seed(seed: int, tag: int) -> int:
    return int(np.random.SeedSequence((int(seed), int(tag))).generate_state(1)[0])


def _run_cells(cell_fn, cells, n_jobs):
    n_jobs = load_n_jobs() if n_jobs is None else n_jobs
    chunks = Parallel(n_jobs=n_jobs)(delayed(cell_fn)(*cell) for cell in cells)
    return [row for chunk in chunks for row in chunk]


def _scenario_samples(scenario, n, seed, test_size):
    data, truth = sample_scenario(scenario, n, derived_seed(seed, 0))
    test, _ = sample_scenario(scenario, test_size, derived_seed(seed, 1))
    return data, test, truth


# =============================================================================
# SUBSPACE CONVERGENCE
# =============================================================================

def _subspace_cell(scenario, n, seed, lifetime, n_trees, step):
    data, truth = sample_scenario(scenario, n, derived_seed(seed, 0))
    config = TrimConfig(lifetime=lifetime, n_trees=n_trees, step=step, n_iterations=1, seed=seed)
    model = fit_trim(data, config, n_jobs=1)
    estimate = top_eigvec_subspace(model.egop, truth.rank)
    angle = max_principal_angle(estimate, truth.true_subspace)
    return [result_row("subspace_convergence", scenario, n, lifetime, 1, seed,
                       "proposed", "max_principal_angle", angle)]


def subspace_convergence(scenarios=STUDY_SCENARIOS, n_grid=N_GRID, seeds=SEEDS, lifetime=LIFETIME,
                         n_trees=N_TREES, step=STEP, n_jobs=None):
    cells = [(s, n, seed, lifetime, n_trees, step) for s in scenarios for n in n_grid for seed in seeds]
    logger.info(f"subspace_convergence - {len(cells)} cells")
    return _run_cells(_subspace_cell, cells, n_jobs)


# =============================================================================
# MSE VS LIFETIME
# =============================================================================

def _lifetime_cell(scenario, n, lifetime, seed, n_trees, step, n_iterations, oracle, test_size):
    data, test, _ = _scenario_samples(scenario, n, seed, test_size)
    config = TrimConfig(lifetime=lifetime, n_trees=n_trees, step=step, n_iterations=n_iterations, seed=seed)
    models = {
        "baseline": fit_transformed(data, None, config, n_jobs=1),
        "proposed": fit_trim(data, config, n_jobs=1),
        "oracle": fit_transformed(data, oracle, config, n_jobs=1),
    }
    return [result_row("mse_vs_lifetime", scenario, n, lifetime, n_iterations, seed, method, "test_mse", mse(model, test))
            for method, model in models.items()]


def mse_vs_lifetime(scenarios=STUDY_SCENARIOS, n_grid=(N_GRID[-1],), lambda_grid=LAMBDA_GRID, seeds=SEEDS,
                    n_trees=N_TREES, step=STEP, n_iterations=2, test_size=TEST_SIZE, n_jobs=None):
    oracles = {s: oracle_transform(true_egop(s)) for s in scenarios}
    cells = [(s, n, lam, seed, n_trees, step, n_iterations, oracles[s], test_size)
             for s in scenarios for n in n_grid for lam in lambda_grid for seed in seeds]
    logger.info(f"mse_vs_lifetime - {len(cells)} cells")
    return _run_cells(_lifetime_cell, cells, n_jobs)


# =============================================================================
# REITERATION
# =============================================================================

def _reiterate_rows(experiment, label, data, test, true_subspace, k, oracle, lifetime,
                    n_trees, step, iterations, seed):
    """Baseline and oracle test MSE, then angle and test MSE of the proposed forest per K."""
    config = TrimConfig(lifetime=lifetime, n_trees=n_trees, step=step, n_iterations=1, seed=seed)
    rows = [
        result_row(experiment, label, data.n, lifetime, 1, seed, "baseline", "test_mse",
                   mse(fit_transformed(data, None, config, n_jobs=1), test)),
        result_row(experiment, label, data.n, lifetime, 1, seed, "oracle", "test_mse",
                   mse(fit_transformed(data, oracle, config, n_jobs=1), test)),
    ]
    for K in iterations:
        model = fit_trim(data, config.replace(n_iterations=K), n_jobs=1)
        angle = max_principal_angle(top_eigvec_subspace(model.egop, k), true_subspace)
        rows.append(result_row(experiment, label, data.n, lifetime, K, seed, "proposed", "max_principal_angle", angle))
        rows.append(result_row(experiment, label, data.n, lifetime, K, seed, "proposed", "test_mse", mse(model, test)))
    return rows


def _reiterate_cell(scenario, n, lifetime, seed, oracle, n_trees, step, iterations, test_size):
    data, test, truth = _scenario_samples(scenario, n, seed, test_size)
    return _reiterate_rows("trim_reiterate", scenario, data, test, truth.true_subspace, truth.rank, oracle,
                           lifetime, n_trees, step, iterations, seed)


def trim_reiterate(scenarios=STUDY_SCENARIOS, n_grid=N_GRID, lambda_grid=(LIFETIME,), seeds=SEEDS,
                   n_trees=N_TREES, step=STEP, iterations=(1, 2), test_size=TEST_SIZE, n_jobs=None):
    oracles = {s: oracle_transform(true_egop(s)) for s in scenarios}
    cells = [(s, n, lam, seed, oracles[s], n_trees, step, tuple(iterations), test_size)
             for s in scenarios for n in n_grid for lam in lambda_grid for seed in seeds]
    logger.info(f"trim_reiterate - {len(cells)} cells")
    return _run_cells(_reiterate_cell, cells, n_jobs)


# =============================================================================
# EBOLA (SEIR R0)
# =============================================================================

def _ebola_cell(region, n, lifetime, seed, true_subspace, k, oracle, n_trees, step, iterations, test_size):
    data = sample_seir(region, n, derived_seed(seed, 0))
    test = sample_seir(region, test_size, derived_seed(seed, 1))
    return _reiterate_rows("ebola", region, data, test, true_subspace, k, oracle,
                           lifetime, n_trees, step, iterations, seed)


def ebola(regions=REGIONS, n_grid=N_GRID, lambda_grid=(LIFETIME,), seeds=SEEDS, n_trees=N_TREES, step=STEP,
          iterations=(1, 2), k=SEIR_SUBSPACE_DIM, test_size=TEST_SIZE, n_points=QUADRATURE_POINTS, n_jobs=None):
    """The reiteration study on R0; truth and oracle come from the quadrature EGOP with `n_points` nodes per axis."""
    truths, oracles = {}, {}
    for region in regions:
        H = seir_true_egop(region, n_points=n_points, n_jobs=n_jobs)
        truths[region] = top_eigvec_subspace(H, k).columns
        oracles[region] = oracle_transform(H)
    cells = [(region, n, lam, seed, truths[region], k, oracles[region], n_trees, step, tuple(iterations), test_size)
             for region in regions for n in n_grid for lam in lambda_grid for seed in seeds]
    logger.info(f"ebola - {len(cells)} cells")
    return _run_cells(_ebola_cell, cells, n_jobs)


# =============================================================================
# CROSS-VALIDATION BENCHMARK
# =============================================================================

def _fit_mf(data: Dataset, lifetime, n_trees, seed):
    config = TrimConfig(lifetime=lifetime, n_trees=n_trees, n_iterations=1, seed=seed)
    return fit_transformed(data, None, config, n_jobs=1)


def _fit_trim(data: Dataset, lifetime, n_trees, step, n_iterations, seed):
    config = TrimConfig(lifetime=lifetime, n_trees=n_trees, step=step, n_iterations=n_iterations, seed=seed)
    return fit_trim(data, config, n_jobs=1)


def cv_grid(n_trees=N_TREES, seed=0, lambda_grid=CV_LAMBDA_GRID, step_grid=CV_STEP_GRID,
            max_iterations=CV_MAX_ITERATIONS):
    """MF over lambda; TrIM over lambda x t x K with K in 2..max_iterations."""
    grid = [ModelSpec("MF", f"MF(lambda={lam:g})", partial(_fit_mf, lifetime=lam, n_trees=n_trees, seed=seed),
                      {"lambda": lam, "K": 1})
            for lam in lambda_grid]
    for lam in lambda_grid:
        for t in step_grid:
            for K in range(2, max_iterations + 1):
                fit = partial(_fit_trim, lifetime=lam, n_trees=n_trees, step=t, n_iterations=K, seed=seed)
                grid.append(ModelSpec("TrIM", f"TrIM(lambda={lam:g},t={t:g},K={K})", fit,
                                      {"lambda": lam, "t": t, "K": K}))
    return grid


def cv_bench(data: Dataset, label: str = "data", folds=CV_FOLDS, repeats=CV_REPEATS, seed=0,
             n_trees=N_TREES, grid=None, n_jobs=None):
    """One mean-MSE row per repeat and method; lambda/K are the most often selected values."""
    grid = cv_grid(n_trees=n_trees, seed=seed) if grid is None else grid
    if not grid:
        raise ConfigError("cv_bench needs a nonempty model grid")
    params = {spec.label: spec.params for spec in grid}
    result = cross_validate(data, grid, folds=folds, repeats=repeats, seed=seed, n_jobs=n_jobs)
    rows = []
    for record in result.summary().itertuples(index=False):
        chosen = params[record.selected]
        rows.append(result_row("cv_bench", label, data.n, chosen.get("lambda", np.nan), chosen.get("K", 1),
                               record.repeat, record.method, "mean_test_mse", record.mean_mse))
    return rows


def run_experiment(experiment: str, **overrides):
    """Dispatch an experiment id to its runner (cv_bench needs `data`)."""
    runners = {
        "subspace_convergence": subspace_convergence,
        "mse_vs_lifetime": mse_vs_lifetime,
        "trim_reiterate": trim_reiterate,
        "ebola": ebola,
        "cv_bench": cv_bench,
    }
    if experiment not in runners:
        raise ConfigError(f"Unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    overrides = {key: value for key, value in overrides.items() if value is not None}
    return runners[experiment](**overrides)
