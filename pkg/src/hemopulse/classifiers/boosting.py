"""Boosted stump ensembles: AdaBoost.M1, RUSBoost, and LogitBoost.

AdaBoost follows Freund & Schapire's M1 scheme over exact decision
stumps.  RUSBoost (Seiffert et al.) keeps the same weight machinery but
fits each round's stump on a class-balanced subsample: all minority rows
plus an equal number of majority rows drawn without replacement with
probability proportional to the current boosting weights.  Weight updates
always use the full training set.  LogitBoost (Friedman, Hastie &
Tibshirani) performs Newton steps on the binomial log-likelihood with
weighted regression stumps on the working responses.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataError
from ..rng import RngStream
from .stumps import DecisionStump, RegressionStump, best_decision_stump, best_regression_stump

_ERR_CLAMP = 1e-10
_WORK_WEIGHT_FLOOR = 1e-5
_WORK_RESPONSE_CLIP = 4.0
_RUS_MAX_REDRAWS = 10


def _stump_votes(stumps: list[DecisionStump], X: np.ndarray) -> np.ndarray:
    return np.stack([s.predict(X) for s in stumps], axis=1) if stumps else np.zeros((X.shape[0], 0))


def adaboost_score(stumps: list[DecisionStump], alphas: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Ensemble margin score sum_t alpha_t h_t(x)."""
    if not stumps:
        return np.zeros(X.shape[0])
    return _stump_votes(stumps, X) @ np.asarray(alphas)


def alpha_from_error(eps: float) -> float:
    """Round weight 0.5 * ln((1 - eps) / eps) with the clamped error."""
    eps = min(max(eps, _ERR_CLAMP), 1.0 - _ERR_CLAMP)
    return 0.5 * float(np.log((1.0 - eps) / eps))


def fit_adaboost(
    X: np.ndarray,
    y_signed: np.ndarray,
    rounds: int,
    collect_weights: bool = False,
) -> dict:
    """Run AdaBoost.M1; returns stumps, alphas, per-round errors.

    Training stops early once a round's best stump is perfect (nothing
    left to reweight) or no stump beats chance (a zero step).
    """
    n = X.shape[0]
    weights = np.full(n, 1.0 / n)
    stumps: list[DecisionStump] = []
    alphas: list[float] = []
    errors: list[float] = []
    trajectory = [weights.copy()] if collect_weights else None

    for _ in range(rounds):
        stump, eps = best_decision_stump(X, y_signed, weights)
        if eps >= 0.5 - 1e-12:
            break
        alpha = alpha_from_error(eps)
        stumps.append(stump)
        alphas.append(alpha)
        errors.append(float(eps))
        weights = weights * np.exp(-alpha * y_signed * stump.predict(X))
        weights /= weights.sum()
        if collect_weights:
            trajectory.append(weights.copy())
        if eps <= _ERR_CLAMP:
            break

    out = {
        "stumps": stumps,
        "alphas": np.array(alphas, dtype=np.float64),
        "round_errors": np.array(errors, dtype=np.float64),
    }
    if collect_weights:
        out["weight_trajectory"] = trajectory
    return out


def _balanced_subsample(
    y_signed: np.ndarray, weights: np.ndarray, gen: np.random.Generator
) -> np.ndarray:
    """All minority rows plus a weight-proportional draw of majority rows."""
    pos = np.nonzero(y_signed > 0)[0]
    neg = np.nonzero(y_signed < 0)[0]
    if pos.size <= neg.size:
        idx_min, idx_maj = pos, neg
    else:
        idx_min, idx_maj = neg, pos
    k = idx_min.size
    w = weights[idx_maj]
    if np.count_nonzero(w) < k:
        # Degenerate boosting weights: blend in a uniform floor so the
        # without-replacement draw stays feasible.
        w = w + 1e-15
    p = w / w.sum()
    chosen = gen.choice(idx_maj, size=k, replace=False, p=p)
    chosen.sort()
    return np.concatenate([idx_min, chosen])


def fit_rusboost(X: np.ndarray, y_signed: np.ndarray, rounds: int, rng: RngStream) -> dict:
    """AdaBoost weight machinery with per-round balanced stump fitting."""
    n = X.shape[0]
    gen = rng.generator()
    weights = np.full(n, 1.0 / n)
    stumps: list[DecisionStump] = []
    alphas: list[float] = []
    errors: list[float] = []
    subsample_counts: list[tuple[int, int]] = []

    for _ in range(rounds):
        stump = None
        eps = 1.0
        counts = None
        for _attempt in range(_RUS_MAX_REDRAWS):
            sub = _balanced_subsample(y_signed, weights, gen)
            sub_w = weights[sub]
            stump_try, _ = best_decision_stump(X[sub], y_signed[sub], sub_w / sub_w.sum())
            eps_try = float(weights[stump_try.predict(X) != y_signed].sum())
            if eps_try < 0.5 - 1e-12:
                stump, eps = stump_try, eps_try
                y_sub = y_signed[sub]
                counts = (int(np.count_nonzero(y_sub > 0)), int(np.count_nonzero(y_sub < 0)))
                break
        if stump is None:
            break
        alpha = alpha_from_error(eps)
        stumps.append(stump)
        alphas.append(alpha)
        errors.append(eps)
        subsample_counts.append(counts)
        weights = weights * np.exp(-alpha * y_signed * stump.predict(X))
        weights /= weights.sum()
        if eps <= _ERR_CLAMP:
            break

    return {
        "stumps": stumps,
        "alphas": np.array(alphas, dtype=np.float64),
        "round_errors": np.array(errors, dtype=np.float64),
        "round_class_counts": subsample_counts,
    }


def logitboost_score(stumps: list[RegressionStump], X: np.ndarray) -> np.ndarray:
    """Additive half log-odds F(x)."""
    F = np.zeros(X.shape[0])
    for s in stumps:
        F += 0.5 * s.predict(X)
    return F


def fit_logitboost(X: np.ndarray, y01: np.ndarray, rounds: int) -> dict:
    """Newton-step boosting of the binomial deviance with regression stumps."""
    n = X.shape[0]
    y = y01.astype(np.float64)
    F = np.zeros(n)
    stumps: list[RegressionStump] = []
    for _ in range(rounds):
        p = 1.0 / (1.0 + np.exp(-2.0 * F))
        w = np.maximum(p * (1.0 - p), _WORK_WEIGHT_FLOOR)
        z = np.clip((y - p) / w, -_WORK_RESPONSE_CLIP, _WORK_RESPONSE_CLIP)
        stump = best_regression_stump(X, z, w)
        stumps.append(stump)
        F += 0.5 * stump.predict(X)
    return {"stumps": stumps}
