"""Shared classifier contract: specs, trained-model container, validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..errors import ConfigError, DataError

KINDS = ("gaussian_nb", "adaboost", "logitboost", "rusboost", "neural_net", "svm")

KERNELS = ("linear", "polynomial", "rbf")

DEFAULT_HYPERPARAMETERS: dict[str, dict[str, Any]] = {
    "gaussian_nb": {},
    "adaboost": {"rounds": 100},
    "logitboost": {"rounds": 100},
    "rusboost": {"rounds": 100},
    "neural_net": {"hidden": 16, "learning_rate": 0.05, "epochs": 500},
    "svm": {"kernel": "rbf", "c": 1.0, "gamma": None, "degree": 3},
}


def _require_positive_int(hp: dict, key: str) -> None:
    v = hp[key]
    if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < 1:
        raise ConfigError(f"hyperparameter {key!r} must be a positive integer, got {v!r}")


@dataclass(frozen=True)
class ClassifierSpec:
    """A classifier family plus its hyperparameters."""

    kind: str
    hyperparameters: dict[str, Any] = field(default_factory=dict)

    def resolved(self) -> "ClassifierSpec":
        """Validate and fill in defaults for missing hyperparameters."""
        if self.kind not in KINDS:
            raise ConfigError(f"unknown classifier kind {self.kind!r}; expected one of {KINDS}")
        defaults = DEFAULT_HYPERPARAMETERS[self.kind]
        unknown = set(self.hyperparameters) - set(defaults)
        if unknown:
            raise ConfigError(
                f"unknown hyperparameters for {self.kind}: {sorted(unknown)}; "
                f"accepted: {sorted(defaults)}"
            )
        hp = {**defaults, **self.hyperparameters}
        if self.kind in ("adaboost", "logitboost", "rusboost"):
            _require_positive_int(hp, "rounds")
        elif self.kind == "neural_net":
            _require_positive_int(hp, "hidden")
            _require_positive_int(hp, "epochs")
            if not hp["learning_rate"] > 0:
                raise ConfigError(f"learning_rate must be positive, got {hp['learning_rate']!r}")
        elif self.kind == "svm":
            if hp["kernel"] not in KERNELS:
                raise ConfigError(f"kernel must be one of {KERNELS}, got {hp['kernel']!r}")
            if not hp["c"] > 0:
                raise ConfigError(f"penalty c must be positive, got {hp['c']!r}")
            if hp["gamma"] is not None and not hp["gamma"] > 0:
                raise ConfigError(f"gamma must be positive or None, got {hp['gamma']!r}")
            _require_positive_int(hp, "degree")
        return ClassifierSpec(self.kind, hp)


@dataclass(frozen=True)
class TrainingMeta:
    feature_space: str
    input_dim: int
    train_seconds: float


@dataclass(frozen=True)
class TrainedModel:
    """Tagged union over the six families; params are kind-specific."""

    spec: ClassifierSpec
    params: dict[str, Any]
    meta: TrainingMeta


def check_training_inputs(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] == 0:
        raise DataError("training features must be a non-empty 2-d matrix")
    if y.shape != (X.shape[0],):
        raise DataError("labels must be a vector with one entry per training row")
    if not np.isfinite(X).all():
        raise DataError("training features contain non-finite values")
    if not np.isin(y, (0, 1)).all():
        raise DataError("labels must lie in {0, 1}")
    y = y.astype(np.int64)
    if len(np.unique(y)) < 2:
        raise DataError("training requires samples from both classes")
    return X, y


def to_signed(y01: np.ndarray) -> np.ndarray:
    """Map {0, 1} labels onto {-1, +1} for margin-based learners."""
    return np.where(y01 == 1, 1.0, -1.0)
