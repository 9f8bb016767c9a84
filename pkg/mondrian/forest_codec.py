"""
Forest Codec - mondrian/forest_codec.py

Self-describing JSON form of a MondrianForest: a version tag, d, lambda,
direction weights, seed and one recursive node record per tree.

    {"format": "mondrian-forest", "version": 1, "dim": 5, "lifetime": 5.0,
     "dir_weights": [...], "seed": 7,
     "trees": [{"lower": [...], "upper": [...], "birth_time": 0.0,
                "count": 100, "label_sum": 12.5,
                "split": {"dim": 2, "loc": 0.41, "left": {...}, "right": {...}}}]}

Floats are written with Python's shortest round-trip repr, so a decoded
forest predicts bit-identically.
"""

import numpy as np

from errors import ModelFormatError
from mondrian.forest import MondrianForest
from mondrian.mondrian_tree import AxisBox, MondrianNode, MondrianTree
from trim_config import MODEL_FORMAT_VERSION

FOREST_FORMAT = "mondrian-forest"


def node_to_dict(node: MondrianNode) -> dict:
    record = {
        "lower": [float(v) for v in node.box.lower],
        "upper": [float(v) for v in node.box.upper],
        "birth_time": float(node.birth_time),
        "count": int(node.count),
        "label_sum": float(node.label_sum),
    }
    if not node.is_leaf:
        record["split"] = {
            "dim": int(node.split_dim),
            "loc": float(node.split_loc),
            "left": node_to_dict(node.left),
            "right": node_to_dict(node.right),
        }
    return record


def node_from_dict(record: dict) -> MondrianNode:
    try:
        node = MondrianNode(
            box=AxisBox(record["lower"], record["upper"]),
            birth_time=float(record["birth_time"]),
            count=int(record["count"]),
            label_sum=float(record["label_sum"]),
        )
        split = record.get("split")
        if split is not None:
            node.split_dim = int(split["dim"])
            node.split_loc = float(split["loc"])
            node.left = node_from_dict(split["left"])
            node.right = node_from_dict(split["right"])
    except (KeyError, TypeError) as e:
        raise ModelFormatError(f"Malformed node record: {e}") from e
    return node


def forest_to_dict(forest: MondrianForest) -> dict:
    return {
        "format": FOREST_FORMAT,
        "version": MODEL_FORMAT_VERSION,
        "dim": int(forest.dim),
        "lifetime": float(forest.lifetime),
        "dir_weights": [float(w) for w in forest.dir_weights],
        "seed": int(forest.seed),
        "trees": [node_to_dict(tree.root) for tree in forest.trees],
    }


def forest_from_dict(payload: dict) -> MondrianForest:
    if payload.get("format") != FOREST_FORMAT:
        raise ModelFormatError(f"Not a forest record (format={payload.get('format')!r})")
    if payload.get("version") != MODEL_FORMAT_VERSION:
        raise ModelFormatError(f"Unsupported forest version {payload.get('version')!r}")
    try:
        lifetime = float(payload["lifetime"])
        trees = [MondrianTree.from_root(node_from_dict(record), lifetime) for record in payload["trees"]]
        return MondrianForest(
            trees=trees,
            lifetime=lifetime,
            dim=int(payload["dim"]),
            dir_weights=np.asarray(payload["dir_weights"], dtype=float),
            seed=int(payload["seed"]),
        )
    except KeyError as e:
        raise ModelFormatError(f"Forest record is missing {e}") from e
