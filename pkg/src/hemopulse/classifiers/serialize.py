"""Versioned JSON persistence for trained models.

Floats are emitted with shortest round-trip precision, so a serialize ->
deserialize cycle reproduces parameter arrays bit for bit.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from ..errors import ModelFormatError
from .base import KINDS, ClassifierSpec, TrainedModel, TrainingMeta
from .stumps import DecisionStump, RegressionStump

FORMAT = "hemopulse-model"
VERSION = 1


def _encode(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return {"__kind__": "array", "dtype": value.dtype.str, "data": value.tolist()}
    if isinstance(value, DecisionStump):
        return {
            "__kind__": "decision_stump",
            "feature_index": value.feature_index,
            "threshold": value.threshold,
            "polarity": value.polarity,
        }
    if isinstance(value, RegressionStump):
        return {
            "__kind__": "regression_stump",
            "feature_index": value.feature_index,
            "threshold": value.threshold,
            "left_value": value.left_value,
            "right_value": value.right_value,
        }
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


def _decode(value: Any) -> Any:
    if isinstance(value, dict):
        kind = value.get("__kind__")
        if kind == "array":
            return np.array(value["data"], dtype=np.dtype(value["dtype"]))
        if kind == "decision_stump":
            return DecisionStump(
                int(value["feature_index"]), float(value["threshold"]), int(value["polarity"])
            )
        if kind == "regression_stump":
            return RegressionStump(
                int(value["feature_index"]),
                float(value["threshold"]),
                float(value["left_value"]),
                float(value["right_value"]),
            )
        return {k: _decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_decode(v) for v in value]
    return value


def model_to_doc(model: TrainedModel) -> dict:
    return {
        "format": FORMAT,
        "version": VERSION,
        "kind": model.spec.kind,
        "hyperparameters": _encode(model.spec.hyperparameters),
        "params": _encode(model.params),
        "training_meta": {
            "feature_space": model.meta.feature_space,
            "input_dim": model.meta.input_dim,
            "train_seconds": model.meta.train_seconds,
        },
    }


def doc_to_model(doc: dict) -> TrainedModel:
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise ModelFormatError(f"not a {FORMAT} document")
    if doc.get("version") != VERSION:
        raise ModelFormatError(
            f"unsupported model document version {doc.get('version')!r}, expected {VERSION}"
        )
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ModelFormatError(f"unknown model kind {kind!r}")
    meta = doc["training_meta"]
    return TrainedModel(
        spec=ClassifierSpec(kind, _decode(doc["hyperparameters"])),
        params=_decode(doc["params"]),
        meta=TrainingMeta(
            feature_space=meta["feature_space"],
            input_dim=int(meta["input_dim"]),
            train_seconds=float(meta["train_seconds"]),
        ),
    )


def serialize_model(model: TrainedModel) -> str:
    return json.dumps(model_to_doc(model), indent=2, sort_keys=True)


def deserialize_model(text: str) -> TrainedModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model document is not valid JSON: {exc}") from exc
    return doc_to_model(doc)
