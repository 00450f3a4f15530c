"""Depth-1 base learners for the boosting families.

Both searches are exact: every (feature, midpoint threshold) pair is
scored through prefix sums over the per-feature sort order, so the
returned stump is the global optimum.  Ties resolve deterministically by
ascending feature index, then ascending threshold, then polarity +1
first, which keeps boosting runs reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError


@dataclass(frozen=True)
class DecisionStump:
    """Predicts polarity above the threshold, -polarity at or below it."""

    feature_index: int
    threshold: float
    polarity: int  # +1 or -1

    def predict(self, X: np.ndarray) -> np.ndarray:
        col = X[:, self.feature_index]
        return np.where(col > self.threshold, self.polarity, -self.polarity).astype(np.float64)


@dataclass(frozen=True)
class RegressionStump:
    """Piecewise-constant regressor with one split."""

    feature_index: int
    threshold: float
    left_value: float
    right_value: float

    def predict(self, X: np.ndarray) -> np.ndarray:
        col = X[:, self.feature_index]
        return np.where(col > self.threshold, self.right_value, self.left_value)


def _split_points(sorted_values: np.ndarray) -> np.ndarray:
    """Indices k where a threshold can sit between v[k] and v[k+1]."""
    return np.nonzero(np.diff(sorted_values) > 0)[0]


def best_decision_stump(
    X: np.ndarray, y_signed: np.ndarray, weights: np.ndarray
) -> tuple[DecisionStump, float]:
    """Globally optimal weighted-error stump; returns (stump, weighted error)."""
    n, d = X.shape
    total_w = float(weights.sum())
    total_s = float((weights * y_signed).sum())
    best_err = np.inf
    best = None
    for f in range(d):
        order = np.argsort(X[:, f], kind="stable")
        v = X[order, f]
        cuts = _split_points(v)
        if cuts.size == 0:
            continue
        prefix_s = np.cumsum((weights * y_signed)[order])
        # err(+1) = sum_w(left, y=+1) + sum_w(right, y=-1); err(-1) = total - err(+1)
        err_plus = (total_w - total_s) / 2.0 + prefix_s[cuts]
        err_both = np.stack([err_plus, total_w - err_plus], axis=1)
        flat = int(np.argmin(err_both))
        err = float(err_both.flat[flat])
        if err < best_err:
            k = cuts[flat // 2]
            polarity = 1 if flat % 2 == 0 else -1
            best_err = err
            best = DecisionStump(f, float((v[k] + v[k + 1]) / 2.0), polarity)
    if best is None:
        raise DataError("every feature is constant; no decision stump exists")
    return best, best_err


def best_regression_stump(
    X: np.ndarray, targets: np.ndarray, weights: np.ndarray
) -> RegressionStump:
    """Weighted least-squares stump fit to real-valued targets."""
    n, d = X.shape
    total_w = float(weights.sum())
    total_wz = float((weights * targets).sum())
    best_gain = -np.inf
    best = None
    for f in range(d):
        order = np.argsort(X[:, f], kind="stable")
        v = X[order, f]
        cuts = _split_points(v)
        if cuts.size == 0:
            continue
        w_left = np.cumsum(weights[order])[cuts]
        wz_left = np.cumsum((weights * targets)[order])[cuts]
        w_right = total_w - w_left
        wz_right = total_wz - wz_left
        # Larger gain = smaller weighted SSE (gain differs from it by a constant).
        gain = wz_left**2 / w_left + wz_right**2 / w_right
        j = int(np.argmax(gain))
        if gain[j] > best_gain:
            k = cuts[j]
            best_gain = float(gain[j])
            best = RegressionStump(
                feature_index=f,
                threshold=float((v[k] + v[k + 1]) / 2.0),
                left_value=float(wz_left[j] / w_left[j]),
                right_value=float(wz_right[j] / w_right[j]),
            )
    if best is None:
        raise DataError("every feature is constant; no regression stump exists")
    return best
