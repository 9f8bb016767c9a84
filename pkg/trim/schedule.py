"""
Default parameter schedule for a sample of size n in d dimensions:

    lambda_n = c_lambda * n^(1/(d+3))
    M_n      = ceil(c_M * n^(1/(d+3)))
    t_n      = c_t * n^(-3/(4d+12))

Only the exponents are fixed by the consistency rates; the constants default
to 1 and live in trim_config.
"""

import math
from typing import NamedTuple

from errors import ConfigError
from trim_config import SCHEDULE_C_LIFETIME, SCHEDULE_C_STEP, SCHEDULE_C_TREES


class Schedule(NamedTuple):
    lifetime: float
    n_trees: int
    step: float


def default_schedule(n: int, d: int, c_lambda: float = SCHEDULE_C_LIFETIME,
                     c_trees: float = SCHEDULE_C_TREES, c_step: float = SCHEDULE_C_STEP) -> Schedule:
    if n < 1 or d < 1:
        raise ConfigError(f"Schedule needs n >= 1 and d >= 1, got n={n}, d={d}")
    if c_lambda <= 0 or c_trees <= 0 or c_step <= 0:
        raise ConfigError("Schedule constants must be positive")
    growth = n ** (1.0 / (d + 3))
    return Schedule(
        lifetime=c_lambda * growth,
        n_trees=max(1, math.ceil(c_trees * growth)),
        step=c_step * n ** (-3.0 / (4 * d + 12)),
    )
