"""
Ridge Scenarios - datasets/scenarios.py

Synthetic multi-index models f(x) = g(B x) on X ~ U[0,1]^5 with Gaussian
label noise (sd 0.1):

    1: g1(B1 x)    2: g2(B1 x)    3: g1(B2 x)    4: g2(B2 x)
    5: (x1 + x2)^2  (sparse model for the reweighted forest)

g1(u) = u1^4 + u2^4 and g2(u) = exp(-0.25 min(u1^2, u2^2)). Gradients are
analytic: grad f(x) = B^T grad g(Bx). For g2 the active coordinate is
argmin(u1^2, u2^2) with ties resolved to the first one.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from datasets.dataset import Dataset
from egop.gradient import EgopEstimate, IndicatorMode, outer_product_average
from errors import ConfigError
from trim_config import N_MC, NOISE_SD

from logger_config import get_logger
logger = get_logger(__name__)

DIM = 5

B1 = np.array([
    [1.0, 1.0, 1.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 1.0, 1.0],
])

B2 = np.array([
    [-0.49424072, 0.11211344, -0.27421644, -0.62783889, 0.52324025],
    [-0.0014017, 0.71072528, 0.69059226, -0.11064719, 0.07554563],
])

B_SPARSE = np.array([[1.0, 1.0, 0.0, 0.0, 0.0]])


# =============================================================================
# LINK FUNCTIONS g AND THEIR GRADIENTS
# =============================================================================

def _g1(U):
    return U[:, 0] ** 4 + U[:, 1] ** 4


def _g1_grad(U):
    return 4.0 * U[:, :2] ** 3


def _g2_active(U):
    # argmin(u1^2, u2^2), ties -> first coordinate
    return np.where(U[:, 1] ** 2 < U[:, 0] ** 2, 1, 0)


def _g2(U):
    return np.exp(-0.25 * np.minimum(U[:, 0] ** 2, U[:, 1] ** 2))


def _g2_grad(U):
    j = _g2_active(U)
    rows = np.arange(U.shape[0])
    u = U[rows, j]
    grad = np.zeros((U.shape[0], 2))
    grad[rows, j] = -0.5 * u * np.exp(-0.25 * u ** 2)
    return grad


def _square(U):
    return U[:, 0] ** 2


def _square_grad(U):
    return 2.0 * U[:, :1]


def _linear(U):
    return U[:, 0].copy()


def _linear_grad(U):
    grad = np.zeros_like(U)
    grad[:, 0] = 1.0
    return grad


LINKS = {
    "g1": (_g1, _g1_grad),
    "g2": (_g2, _g2_grad),
    "square": (_square, _square_grad),
    "linear": (_linear, _linear_grad),
}


@dataclass(frozen=True)
class RidgeFunction:
    """f(x) = g(Bx) with an analytic gradient."""

    B: np.ndarray
    link: str

    def __post_init__(self):
        if self.link not in LINKS:
            raise ConfigError(f"Unknown link function {self.link!r}")
        object.__setattr__(self, "B", np.atleast_2d(np.asarray(self.B, dtype=float)))

    @property
    def dim(self) -> int:
        return self.B.shape[1]

    def value(self, X) -> np.ndarray:
        g, _ = LINKS[self.link]
        return g(np.atleast_2d(X) @ self.B.T)

    def gradient(self, X) -> np.ndarray:
        _, g_grad = LINKS[self.link]
        return g_grad(np.atleast_2d(X) @ self.B.T) @ self.B

    def predict(self, X) -> np.ndarray:
        """Lets the exact function stand in for a fitted estimator."""
        return self.value(X)


@dataclass(frozen=True)
class SyntheticScenario:
    id: int
    function: RidgeFunction
    noise_sd: float = NOISE_SD

    @property
    def B(self) -> np.ndarray:
        return self.function.B

    @property
    def d(self) -> int:
        return self.function.dim


SCENARIOS = {
    1: SyntheticScenario(1, RidgeFunction(B1, "g1")),
    2: SyntheticScenario(2, RidgeFunction(B1, "g2")),
    3: SyntheticScenario(3, RidgeFunction(B2, "g1")),
    4: SyntheticScenario(4, RidgeFunction(B2, "g2")),
    5: SyntheticScenario(5, RidgeFunction(B_SPARSE, "square")),
}

STUDY_SCENARIOS = (1, 2, 3, 4)


def get_scenario(scenario) -> SyntheticScenario:
    if isinstance(scenario, SyntheticScenario):
        return scenario
    try:
        return SCENARIOS[int(scenario)]
    except (KeyError, ValueError, TypeError):
        raise ConfigError(f"Unknown scenario {scenario!r}; choose one of {sorted(SCENARIOS)}") from None


# =============================================================================
# TRUTH
# =============================================================================

@dataclass(frozen=True)
class ScenarioTruth:
    B: np.ndarray
    function: RidgeFunction
    true_subspace: np.ndarray
    true_egop_estimator: Callable

    @property
    def rank(self) -> int:
        return self.true_subspace.shape[1]


def row_span_basis(B) -> np.ndarray:
    """Orthonormal d x s basis of the row span of B."""
    Q, _ = np.linalg.qr(np.atleast_2d(B).T)
    return Q


def true_egop(scenario, n_mc: int = N_MC, seed: int = 0) -> EgopEstimate:
    """
    Monte Carlo average of grad f grad f^T over x ~ U[0,1]^d with analytic
    gradients. Accepts a scenario id, a SyntheticScenario or a RidgeFunction.
    """
    if n_mc < 1:
        raise ConfigError(f"n_mc must be at least 1, got {n_mc}")
    function = scenario if isinstance(scenario, RidgeFunction) else get_scenario(scenario).function
    X = np.random.default_rng(seed).random((n_mc, function.dim))
    H = outer_product_average(function.gradient(X))
    return EgopEstimate(matrix=H, step=0.0, n_eval=n_mc, indicator_mode=IndicatorMode.OFF)


# =============================================================================
# SAMPLING
# =============================================================================

def sample_inputs(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    return rng.random((n, d))


def sample_scenario(scenario, n: int, seed: int, noise_sd: Optional[float] = None):
    """
    Draw a training set and its ground truth.

    Returns (Dataset, ScenarioTruth); labels are f(x) plus N(0, noise_sd^2).
    """
    if n < 1:
        raise ConfigError(f"Sample size must be at least 1, got {n}")
    spec = get_scenario(scenario)
    sd = spec.noise_sd if noise_sd is None else float(noise_sd)
    rng = np.random.default_rng(seed)
    X = sample_inputs(n, spec.d, rng)
    y = spec.function.value(X)
    if sd > 0:
        y = y + rng.normal(0.0, sd, size=n)

    function = spec.function
    truth = ScenarioTruth(
        B=function.B,
        function=function,
        true_subspace=row_span_basis(function.B),
        true_egop_estimator=lambda n_mc=N_MC, mc_seed=seed: true_egop(function, n_mc, mc_seed),
    )
    logger.debug(f"Scenario {spec.id} sampled - n={n}, seed={seed}, noise_sd={sd:g}")
    return Dataset(X, y, tuple(f"x{j + 1}" for j in range(spec.d))), truth
