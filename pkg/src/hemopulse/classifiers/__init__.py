"""Six classifier families behind one train / predict / score contract.

All learners share the screening tie rule: a decision score of exactly 0
predicts the positive (hemorrhage) class, because a missed bleed costs
far more than a false alarm.
"""

from __future__ import annotations

import time

import numpy as np

from ..errors import FeatureSpaceMismatchError
from ..rng import RngStream, as_stream
from .base import (
    DEFAULT_HYPERPARAMETERS,
    KINDS,
    ClassifierSpec,
    TrainedModel,
    TrainingMeta,
    check_training_inputs,
    to_signed,
)
from .boosting import (
    adaboost_score,
    fit_adaboost,
    fit_logitboost,
    fit_rusboost,
    logitboost_score,
)
from .naive_bayes import fit_gaussian_nb, gaussian_nb_score
from .neural_net import fit_neural_net, loss_and_gradients, neural_net_score
from .serialize import deserialize_model, doc_to_model, model_to_doc, serialize_model
from .stumps import DecisionStump, RegressionStump
from .svm import fit_svm, kkt_violations, svm_score

__all__ = [
    "KINDS",
    "DEFAULT_HYPERPARAMETERS",
    "ClassifierSpec",
    "TrainedModel",
    "TrainingMeta",
    "DecisionStump",
    "RegressionStump",
    "train",
    "predict",
    "decision_scores",
    "serialize_model",
    "deserialize_model",
    "model_to_doc",
    "doc_to_model",
    "loss_and_gradients",
    "kkt_violations",
]


def train(
    spec: ClassifierSpec,
    X: np.ndarray,
    y: np.ndarray,
    rng: RngStream | int = 0,
    feature_space: str = "unspecified",
) -> TrainedModel:
    """Fit one classifier; deterministic given (spec, data, rng)."""
    spec = spec.resolved()
    X, y = check_training_inputs(X, y)
    rng = as_stream(rng)
    hp = spec.hyperparameters

    start = time.perf_counter()
    if spec.kind == "gaussian_nb":
        params = fit_gaussian_nb(X, y)
    elif spec.kind == "adaboost":
        params = fit_adaboost(X, to_signed(y), hp["rounds"])
    elif spec.kind == "rusboost":
        params = fit_rusboost(X, to_signed(y), hp["rounds"], rng)
    elif spec.kind == "logitboost":
        params = fit_logitboost(X, y, hp["rounds"])
    elif spec.kind == "neural_net":
        params = fit_neural_net(X, y, hp["hidden"], hp["learning_rate"], hp["epochs"], rng)
    else:
        params = fit_svm(X, y, hp["c"], hp["kernel"], hp["gamma"], hp["degree"])
    elapsed = time.perf_counter() - start

    return TrainedModel(
        spec=spec,
        params=params,
        meta=TrainingMeta(feature_space=feature_space, input_dim=X.shape[1], train_seconds=elapsed),
    )


def _check_dim(model: TrainedModel, X: np.ndarray, input_space: str) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.meta.input_dim:
        dim = X.shape[1] if X.ndim == 2 else -1
        raise FeatureSpaceMismatchError(
            model.meta.feature_space, model.meta.input_dim, input_space, dim
        )
    return X


def decision_scores(
    model: TrainedModel, X: np.ndarray, input_space: str = "unknown"
) -> np.ndarray:
    """Real-valued score per row; >= 0 means the positive class."""
    X = _check_dim(model, X, input_space)
    kind = model.spec.kind
    if kind == "gaussian_nb":
        return gaussian_nb_score(model.params, X)
    if kind in ("adaboost", "rusboost"):
        return adaboost_score(model.params["stumps"], model.params["alphas"], X)
    if kind == "logitboost":
        return logitboost_score(model.params["stumps"], X)
    if kind == "neural_net":
        return neural_net_score(model.params, X)
    return svm_score(model.params, X)


def predict(model: TrainedModel, X: np.ndarray, input_space: str = "unknown") -> np.ndarray:
    """Binary labels under the score-ties-go-positive rule."""
    return (decision_scores(model, X, input_space) >= 0.0).astype(np.int64)
