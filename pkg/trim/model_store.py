"""
Model persistence - one JSON document per TrimModel:

    {"format": "trim-model", "version": 1, "config": {...},
     "transform": {...}, "iteration": 1, "flags": [...],
     "egop": {...} | null, "weights": {...} | null, "forest": {...}}

Keys are sorted and floats use the shortest round-trip repr, so fitting
twice with the same seed writes byte-identical files.
"""

import json
import os

import numpy as np

from egop.gradient import EgopEstimate, ImportanceWeights
from egop.transform import TransformMatrix
from errors import ConfigError, ModelFormatError
from mondrian.forest_codec import forest_from_dict, forest_to_dict
from trim.trim_model import TrimConfig, TrimModel
from trim_config import MODEL_FORMAT_VERSION

from logger_config import get_logger
logger = get_logger(__name__)

MODEL_FORMAT = "trim-model"


def _weights_to_dict(weights: ImportanceWeights) -> dict:
    return {
        "omega": [float(v) for v in weights.omega],
        "normalized": [float(v) for v in weights.normalized],
        "flags": list(weights.flags),
    }


def _weights_from_dict(payload: dict) -> ImportanceWeights:
    return ImportanceWeights(
        omega=np.asarray(payload["omega"], dtype=float),
        normalized=np.asarray(payload["normalized"], dtype=float),
        flags=tuple(payload.get("flags", ())),
    )


def model_to_dict(model: TrimModel) -> dict:
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_FORMAT_VERSION,
        "config": model.config.to_dict(),
        "transform": model.transform.to_dict(),
        "iteration": int(model.iteration),
        "flags": list(model.flags),
        "egop": None if model.egop is None else model.egop.to_dict(),
        "weights": None if model.weights is None else _weights_to_dict(model.weights),
        "forest": forest_to_dict(model.forest),
    }


def model_from_dict(payload: dict) -> TrimModel:
    if not isinstance(payload, dict) or payload.get("format") != MODEL_FORMAT:
        raise ModelFormatError("Not a TrIM model file")
    if payload.get("version") != MODEL_FORMAT_VERSION:
        raise ModelFormatError(f"Unsupported model version {payload.get('version')!r}")
    try:
        model = TrimModel(
            transform=TransformMatrix.from_dict(payload["transform"]),
            forest=forest_from_dict(payload["forest"]),
            config=TrimConfig.from_dict(payload["config"]),
            iteration=int(payload["iteration"]),
            egop=None if payload.get("egop") is None else EgopEstimate.from_dict(payload["egop"]),
            weights=None if payload.get("weights") is None else _weights_from_dict(payload["weights"]),
            flags=tuple(payload.get("flags", ())),
        )
    except (KeyError, TypeError, ValueError, ConfigError) as e:
        raise ModelFormatError(f"Malformed model record: {e}") from e
    if model.transform.dim != model.forest.dim:
        raise ModelFormatError(f"Transform is {model.transform.dim}-dimensional, forest is {model.forest.dim}")
    return model


def save_model(model: TrimModel, path: str) -> str:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(model_to_dict(model), f, sort_keys=True, separators=(",", ":"))
        f.write("\n")
    logger.info(f"Model saved - {path}")
    return path


def load_model(path: str) -> TrimModel:
    if not os.path.exists(path):
        raise ModelFormatError(f"Model file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"Model file {path} is not valid JSON: {e}") from e
    model = model_from_dict(payload)
    logger.info(f"Model loaded - {path} (d={model.dim}, {model.forest.n_trees} trees)")
    return model
