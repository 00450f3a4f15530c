"""Confusion counts and classification metrics.

Accuracy, precision, recall (sensitivity), specificity and F1 follow the
usual binary definitions:

    A  = (TP + TN) / (TP + TN + FP + FN)
    P  = TP / (TP + FP)
    R  = TP / (TP + FN)
    S  = TN / (TN + FP)
    F1 = 2 P R / (P + R)

A zero denominator yields 0 instead of an error so a degenerate fold does
not abort a benchmark run; the affected metric names are carried in
``MetricsRecord.degenerate`` so reports can flag them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def swapped(self) -> "ConfusionCounts":
        """Counts with the positive/negative roles exchanged."""
        return ConfusionCounts(tp=self.tn, tn=self.tp, fp=self.fn, fn=self.fp)


@dataclass(frozen=True)
class MetricsRecord:
    accuracy: float
    precision: float
    recall: float
    specificity: float
    f1: float
    positive_class: int
    averaging: str  # "binary" or "macro"
    degenerate: tuple[str, ...] = ()


def _as_binary_vector(v, name: str) -> np.ndarray:
    arr = np.asarray(v)
    if arr.ndim != 1 or arr.size == 0:
        raise DataError(f"{name} must be a non-empty 1-d vector")
    if not np.isin(arr, (0, 1)).all():
        raise DataError(f"{name} contains entries outside {{0, 1}}")
    return arr.astype(np.int64)


def compute_confusion(predicted, actual, positive_class: int = 1) -> ConfusionCounts:
    """Tally the four confusion cells of a binary prediction.

    ``positive_class`` selects which label counts as a detection; swapping
    it exchanges tp<->tn and fp<->fn.
    """
    if positive_class not in (0, 1):
        raise DataError("positive_class must be 0 or 1")
    pred = _as_binary_vector(predicted, "predicted")
    act = _as_binary_vector(actual, "actual")
    if pred.shape != act.shape:
        raise DataError(f"length mismatch: predicted has {pred.size}, actual has {act.size}")
    pos_pred = pred == positive_class
    pos_act = act == positive_class
    return ConfusionCounts(
        tp=int(np.count_nonzero(pos_pred & pos_act)),
        tn=int(np.count_nonzero(~pos_pred & ~pos_act)),
        fp=int(np.count_nonzero(pos_pred & ~pos_act)),
        fn=int(np.count_nonzero(~pos_pred & pos_act)),
    )


def _ratio(num: int, den: int, name: str, flags: list[str]) -> float:
    if den == 0:
        flags.append(name)
        return 0.0
    return num / den


def f1_from_precision_recall(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both vanish."""
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def compute_metrics(c: ConfusionCounts, positive_class: int = 1) -> MetricsRecord:
    """Binary metrics for the given confusion counts."""
    if c.total <= 0:
        raise DataError("confusion counts are empty")
    flags: list[str] = []
    precision = _ratio(c.tp, c.tp + c.fp, "precision", flags)
    recall = _ratio(c.tp, c.tp + c.fn, "recall", flags)
    specificity = _ratio(c.tn, c.tn + c.fp, "specificity", flags)
    f1 = f1_from_precision_recall(precision, recall)
    if precision + recall == 0:
        flags.append("f1")
    return MetricsRecord(
        accuracy=(c.tp + c.tn) / c.total,
        precision=precision,
        recall=recall,
        specificity=specificity,
        f1=f1,
        positive_class=positive_class,
        averaging="binary",
        degenerate=tuple(flags),
    )


def compute_macro_metrics(c: ConfusionCounts, positive_class: int = 1) -> MetricsRecord:
    """Unweighted two-class average of the per-class binary metrics.

    Each class takes a turn as the positive one; the macro value is the
    mean of the two binary values.  Accuracy is class-symmetric and is
    reported unchanged.
    """
    first = compute_metrics(c, positive_class)
    second = compute_metrics(c.swapped(), 1 - positive_class)
    flags = tuple(dict.fromkeys(first.degenerate + second.degenerate))
    return MetricsRecord(
        accuracy=first.accuracy,
        precision=(first.precision + second.precision) / 2.0,
        recall=(first.recall + second.recall) / 2.0,
        specificity=(first.specificity + second.specificity) / 2.0,
        f1=(first.f1 + second.f1) / 2.0,
        positive_class=positive_class,
        averaging="macro",
        degenerate=flags,
    )
