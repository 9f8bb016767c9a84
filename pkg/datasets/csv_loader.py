"""
CSV Loader - datasets/csv_loader.py

Reads comma-separated numeric tables with a header row (UTF-8, '.' decimal)
into a Dataset, and writes Datasets back in the same format.
"""

import os

import numpy as np
import pandas as pd

from datasets.dataset import Dataset
from errors import DatasetError

from logger_config import get_logger
logger = get_logger(__name__)


def _read_numeric(path: str) -> pd.DataFrame:
    """
    Parse `path` into a float frame. Missing or non-numeric cells are
    rejected with their data row number (1-based, header excluded) and
    column name.
    """
    if not os.path.exists(path):
        raise DatasetError(f"CSV file not found: {path}")
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise DatasetError(f"CSV file is empty: {path}") from None
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DatasetError(f"Could not parse {path}: {e}") from e

    raw.columns = [str(c).strip() for c in raw.columns]
    if raw.empty:
        raise DatasetError(f"CSV file has a header but no rows: {path}")

    numeric = raw.apply(lambda col: pd.to_numeric(col.str.strip(), errors="coerce"))
    bad = numeric.isna().to_numpy() | ~np.isfinite(numeric.to_numpy(dtype=float, na_value=np.nan))
    if bad.any():
        row, col = np.argwhere(bad)[0]
        value = raw.iat[row, col]
        raise DatasetError(
            f"Non-numeric or missing value {value!r} at row {row + 1}, column {raw.columns[col]!r} in {path}"
        )
    return numeric


def load_csv(path: str, target: str) -> Dataset:
    """Load `path` with `target` as the label column and every other column as an input."""
    numeric = _read_numeric(path)
    if target not in numeric.columns:
        raise DatasetError(f"Target column {target!r} not in {list(numeric.columns)}")

    features = [c for c in numeric.columns if c != target]
    dataset = Dataset(numeric[features].to_numpy(dtype=float), numeric[target].to_numpy(dtype=float), tuple(features))
    logger.info(f"CSV loaded - {path}: n={dataset.n}, d={dataset.d}, target={target}")
    return dataset


def load_inputs(path: str, drop=()) -> np.ndarray:
    """Input matrix of `path`, skipping any column named in `drop`."""
    numeric = _read_numeric(path)
    features = [c for c in numeric.columns if c not in set(drop)]
    return numeric[features].to_numpy(dtype=float)


def save_csv(dataset: Dataset, path: str, target: str = "y"):
    names = dataset.feature_names or tuple(f"x{j + 1}" for j in range(dataset.d))
    if target in names:
        raise DatasetError(f"Target name {target!r} collides with a feature name")
    frame = pd.DataFrame(dataset.X, columns=list(names))
    frame[target] = dataset.y
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    frame.to_csv(path, index=False, encoding="utf-8", float_format="%.17g")
    logger.info(f"CSV written - {path}: n={dataset.n}, d={dataset.d}")
