"""Gaussian naive Bayes baseline."""

from __future__ import annotations

import numpy as np

_VAR_SMOOTHING = 1e-9


def fit_gaussian_nb(X: np.ndarray, y01: np.ndarray) -> dict:
    """Class priors plus per-class, per-feature Gaussian moments.

    Variances get an additive floor of 1e-9 times the largest overall
    feature variance, which keeps log-densities finite on constant
    features.
    """
    n = X.shape[0]
    max_var = float(X.var(axis=0).max())
    smoothing = _VAR_SMOOTHING * max_var if max_var > 0 else 1e-12
    params: dict = {"smoothing": smoothing}
    for cls in (0, 1):
        rows = X[y01 == cls]
        params[f"prior_{cls}"] = rows.shape[0] / n
        params[f"mean_{cls}"] = rows.mean(axis=0)
        params[f"var_{cls}"] = rows.var(axis=0) + smoothing
    return params


def gaussian_nb_score(params: dict, X: np.ndarray) -> np.ndarray:
    """Log-posterior difference log P(1|x) - log P(0|x)."""

    def log_joint(cls: int) -> np.ndarray:
        mean = np.asarray(params[f"mean_{cls}"])
        var = np.asarray(params[f"var_{cls}"])
        ll = -0.5 * (np.log(2.0 * np.pi * var) + (X - mean) ** 2 / var).sum(axis=1)
        return ll + np.log(params[f"prior_{cls}"])

    return log_joint(1) - log_joint(0)
