"""
Long-format result tables.

Every experiment emits rows with the same columns; rows are sorted on all
key columns before writing so a file does not depend on worker scheduling.
"""

import os

import pandas as pd

from errors import ConfigError

from logger_config import get_logger
logger = get_logger(__name__)

RESULT_COLUMNS = ("experiment", "scenario", "n", "lambda", "K", "seed", "method", "metric", "value")
RESULT_DTYPES = {
    "experiment": "object",
    "scenario": "object",
    "n": "int64",
    "lambda": "float64",
    "K": "int64",
    "seed": "int64",
    "method": "object",
    "metric": "object",
    "value": "float64",
}
SORT_KEYS = ["experiment", "scenario", "n", "lambda", "K", "seed", "method", "metric"]


def result_row(experiment, scenario, n, lifetime, K, seed, method, metric, value) -> dict:
    return {
        "experiment": str(experiment),
        "scenario": str(scenario),
        "n": int(n),
        "lambda": float(lifetime),
        "K": int(K),
        "seed": int(seed),
        "method": str(method),
        "metric": str(metric),
        "value": float(value),
    }


def results_frame(rows) -> pd.DataFrame:
    frame = pd.DataFrame(list(rows), columns=list(RESULT_COLUMNS))
    missing = frame[list(RESULT_COLUMNS)].isna().drop(columns=["value"]).any(axis=1)
    if missing.any():
        raise ConfigError(f"{int(missing.sum())} result rows have empty key columns")
    frame = frame.astype(RESULT_DTYPES)
    return frame.sort_values(SORT_KEYS, kind="mergesort").reset_index(drop=True)


def write_results(rows, path: str) -> pd.DataFrame:
    frame = results_frame(rows)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    logger.info(f"Results written - {len(frame)} rows -> {path}")
    return frame
