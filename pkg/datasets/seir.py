"""
SEIR Ebola Study - datasets/seir.py

Basic reproduction number of the modified SEIR Ebola model and its
gradient with respect to normalized parameters:

    R0 = (beta1 + beta2 rho1 gamma1 / omega + beta3 psi / gamma2) / (gamma1 + psi)

Each physical parameter p is uniform on [l, u] and normalized to
x in [-1, 1] through p = l + (u - l)(x + 1)/2, so dR0/dx = dR0/dp * (u - l)/2.

The true EGOP is integrated with a tensor Gauss-Legendre rule (8 nodes per
dimension, 8^8 nodes in total) evaluated block by block.
"""

import itertools

import numpy as np
from joblib import Parallel, delayed

from datasets.dataset import Dataset
from egop.gradient import EgopEstimate, IndicatorMode, outer_product_average
from errors import ConfigError, DimensionMismatch
from trim_config import QUADRATURE_POINTS, load_n_jobs

from logger_config import get_logger
logger = get_logger(__name__)

PARAMETERS = ("beta1", "beta2", "beta3", "rho1", "gamma1", "gamma2", "omega", "psi")

SEIR_RANGES = {
    "Liberia": {
        "beta1": (0.1, 0.4),
        "beta2": (0.1, 0.4),
        "beta3": (0.05, 0.2),
        "rho1": (0.41, 1.0),
        "gamma1": (0.0276, 0.1702),
        "gamma2": (0.081, 0.21),
        "omega": (0.25, 0.5),
        "psi": (0.0833, 0.7),
    },
    "SierraLeone": {
        "beta1": (0.1, 0.4),
        "beta2": (0.1, 0.4),
        "beta3": (0.05, 0.2),
        "rho1": (0.41, 1.0),
        "gamma1": (0.0275, 0.1569),
        "gamma2": (0.1236, 0.384),
        "omega": (0.25, 0.5),
        "psi": (0.0833, 0.7),
    },
}

REGIONS = tuple(SEIR_RANGES)


def region_bounds(region: str):
    """(lower, upper) arrays in PARAMETERS order."""
    if region not in SEIR_RANGES:
        raise ConfigError(f"Unknown region {region!r}; choose one of {list(REGIONS)}")
    ranges = SEIR_RANGES[region]
    lower = np.array([ranges[name][0] for name in PARAMETERS])
    upper = np.array([ranges[name][1] for name in PARAMETERS])
    return lower, upper


def to_physical(X, region: str) -> np.ndarray:
    lower, upper = region_bounds(region)
    return lower + (upper - lower) / 2.0 * (np.asarray(X, dtype=float) + 1.0)


def midpoint(region: str) -> np.ndarray:
    lower, upper = region_bounds(region)
    return (lower + upper) / 2.0


# =============================================================================
# R0 AND ITS GRADIENT
# =============================================================================

def _unpack(params):
    P = np.asarray(params, dtype=float)
    if P.shape[-1] != len(PARAMETERS):
        raise DimensionMismatch(f"R0 takes {len(PARAMETERS)} parameters, got {P.shape[-1]}")
    b1, b2, b3, rho1, g1, g2, om, psi = np.moveaxis(P, -1, 0)
    if np.any(om <= 0) or np.any(g2 <= 0) or np.any(g1 + psi <= 0):
        raise ConfigError("R0 needs omega > 0, gamma2 > 0 and gamma1 + psi > 0")
    return b1, b2, b3, rho1, g1, g2, om, psi


def seir_r0(params):
    """R0 for one parameter vector (float) or a stack of them (array)."""
    b1, b2, b3, rho1, g1, g2, om, psi = _unpack(params)
    r0 = (b1 + b2 * rho1 * g1 / om + b3 * psi / g2) / (g1 + psi)
    return float(r0) if np.ndim(r0) == 0 else r0


def seir_r0_gradient(params, region=None) -> np.ndarray:
    """
    Partial derivatives of R0 in PARAMETERS order.

    Physical-parameter partials by default; with `region` each partial is
    scaled by (u - l)/2 to give the gradient in normalized coordinates.
    """
    b1, b2, b3, rho1, g1, g2, om, psi = _unpack(params)
    den = g1 + psi
    num = b1 + b2 * rho1 * g1 / om + b3 * psi / g2
    grad = np.stack([
        1.0 / den,
        rho1 * g1 / (om * den),
        psi / (g2 * den),
        b2 * g1 / (om * den),
        (b2 * rho1 / om) / den - num / den ** 2,
        -b3 * psi / (g2 ** 2 * den),
        -b2 * rho1 * g1 / (om ** 2 * den),
        (b3 / g2) / den - num / den ** 2,
    ], axis=-1)
    if region is not None:
        lower, upper = region_bounds(region)
        grad = grad * (upper - lower) / 2.0
    return grad


# =============================================================================
# SAMPLING
# =============================================================================

def sample_seir(region: str, n: int, seed: int, noise_sd: float = 0.0) -> Dataset:
    """Normalized inputs x ~ U[-1, 1]^8 with response R0(p(x))."""
    if n < 1:
        raise ConfigError(f"Sample size must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1.0, 1.0, size=(n, len(PARAMETERS)))
    y = seir_r0(to_physical(X, region))
    if noise_sd > 0:
        y = y + rng.normal(0.0, noise_sd, size=n)
    return Dataset(X, np.atleast_1d(y), PARAMETERS)


class SeirResponse:
    """R0 over normalized coordinates, usable wherever an estimator is expected."""

    def __init__(self, region: str):
        self.region = region
        region_bounds(region)

    def predict(self, X) -> np.ndarray:
        return np.atleast_1d(seir_r0(to_physical(np.atleast_2d(X), self.region)))

    def gradient(self, X) -> np.ndarray:
        return seir_r0_gradient(to_physical(np.atleast_2d(X), self.region), self.region)


# =============================================================================
# TRUE EGOP
# =============================================================================

def gauss_legendre(n_points: int = QUADRATURE_POINTS):
    """Nodes and weights on [-1, 1]; the weights sum to 2."""
    return np.polynomial.legendre.leggauss(n_points)


def tensor_grid(nodes, weights, dims: int):
    """All dims-tuples of nodes with the matching product weights."""
    node_axes = np.meshgrid(*([nodes] * dims), indexing="ij")
    weight_axes = np.meshgrid(*([weights] * dims), indexing="ij")
    points = np.stack([axis.ravel() for axis in node_axes], axis=1)
    point_weights = np.prod(np.stack([axis.ravel() for axis in weight_axes], axis=1), axis=1)
    return points, point_weights


def _quadrature_block(region, head_nodes, head_weight, tail, tail_w):
    X = np.hstack([np.tile(head_nodes, (tail.shape[0], 1)), tail])
    G = seir_r0_gradient(to_physical(X, region), region)
    w = head_weight * tail_w
    return (G * w[:, None]).T @ G


def seir_true_egop(region: str, n_points: int = QUADRATURE_POINTS, n_jobs=None) -> EgopEstimate:
    """
    Tensor Gauss-Legendre approximation of E[grad R0 grad R0^T] under the
    uniform density (1/2)^8 on [-1, 1]^8.
    """
    d = len(PARAMETERS)
    nodes, weights = gauss_legendre(n_points)
    weights = weights / 2.0
    head_dims = 2
    heads = list(itertools.product(range(n_points), repeat=head_dims))
    tail, tail_w = tensor_grid(nodes, weights, d - head_dims)
    n_jobs = load_n_jobs() if n_jobs is None else n_jobs

    def blocks():
        for idx in heads:
            yield delayed(_quadrature_block)(
                region, nodes[list(idx)], float(np.prod(weights[list(idx)])), tail, tail_w,
            )

    partials = Parallel(n_jobs=n_jobs)(blocks())
    H = np.zeros((d, d))
    for part in partials:
        H += part
    H = (H + H.T) / 2.0
    logger.info(f"SEIR true EGOP integrated - {region}, {n_points ** d} nodes, trace={np.trace(H):.4g}")
    return EgopEstimate(matrix=H, step=0.0, n_eval=n_points ** d, indicator_mode=IndicatorMode.OFF)


def seir_monte_carlo_egop(region: str, n_mc: int, seed: int) -> EgopEstimate:
    """Plain Monte Carlo counterpart of seir_true_egop."""
    X = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(n_mc, len(PARAMETERS)))
    H = outer_product_average(seir_r0_gradient(to_physical(X, region), region))
    return EgopEstimate(matrix=H, step=0.0, n_eval=n_mc, indicator_mode=IndicatorMode.OFF)
