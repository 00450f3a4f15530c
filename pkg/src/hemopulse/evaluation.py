"""Stratified splitting, grid search, and the three-space benchmark.

The benchmark is a pure function of (cohort, configuration, master seed):
every stochastic step draws from a stream derived from the master seed
and the cell's position, so results are identical regardless of execution
order.  Preprocessing (scaler, PCA) is fitted on the training split only
and applied unchanged to validation and test rows, which is what makes
the no-leakage guarantee checkable by exact refit comparison.

Wall-clock timings (training, per-sample inference) appear in the CSV
report but are deliberately left out of the JSON report so that repeated
runs with identical inputs produce byte-identical JSON.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import classifiers
from .classifiers import ClassifierSpec, TrainedModel
from .cohort import Cohort
from .errors import ConfigError, DataError, HemopulseError, NumericError
from .metrics import ConfusionCounts, compute_confusion, compute_macro_metrics, compute_metrics
from .preprocess import (
    DEFAULT_VARIANCE_THRESHOLD,
    FeatureSpaceModel,
    apply_feature_space,
    fit_feature_space,
)
from .rng import RngStream, as_stream

DEFAULT_FRACTIONS = (0.70, 0.15, 0.15)
DEFAULT_SPACES = ("original", "reduced", "pca")

DEFAULT_GRIDS: dict[str, list[dict[str, Any]]] = {
    "gaussian_nb": [{}],
    "adaboost": [{"rounds": 50}, {"rounds": 100}],
    "logitboost": [{"rounds": 50}, {"rounds": 100}],
    "rusboost": [{"rounds": 50}, {"rounds": 100}],
    "neural_net": [{"hidden": 8}, {"hidden": 16}],
    "svm": [{"kernel": "rbf", "c": 1.0}, {"kernel": "rbf", "c": 10.0}],
}

CSV_HEADER = (
    "model,space,accuracy,precision,recall,specificity,f1_binary,f1_macro,"
    "tp,tn,fp,fn,train_ms,infer_us_per_sample"
)


@dataclass(frozen=True)
class SplitPlan:
    train_idx: np.ndarray
    val_idx: np.ndarray
    test_idx: np.ndarray
    fractions: tuple[float, float, float]
    seed: RngStream


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignment: np.ndarray  # fold id per sample
    seed: RngStream

    def fold_indices(self, fold: int) -> np.ndarray:
        return np.nonzero(self.assignment == fold)[0]


def _class_shuffles(y: np.ndarray, gen: np.random.Generator) -> dict[int, np.ndarray]:
    """Per-class index permutations, consumed in ascending class order."""
    return {cls: gen.permutation(np.nonzero(y == cls)[0]) for cls in (0, 1)}


def stratified_split(
    y: np.ndarray,
    fractions: tuple[float, float, float] = DEFAULT_FRACTIONS,
    rng: RngStream | int = 0,
) -> SplitPlan:
    """Disjoint train/val/test indices preserving class proportions.

    Per class, part sizes are floor(fraction * class size) with leftover
    samples going to the parts with the largest fractional remainders
    (ties broken in train, val, test order).
    """
    y = np.asarray(y)
    if abs(sum(fractions) - 1.0) > 1e-9 or any(f < 0 for f in fractions):
        raise ConfigError(f"fractions must be non-negative and sum to 1, got {fractions}")
    rng = as_stream(rng)
    gen = rng.generator()
    parts: list[list[np.ndarray]] = [[], [], []]
    for cls in (0, 1):
        pool = np.nonzero(y == cls)[0]
        if pool.size < 3:
            raise DataError(f"class {cls} has {pool.size} samples; need at least 3 to split")
        shuffled = gen.permutation(pool)
        exact = [f * pool.size for f in fractions]
        counts = [int(np.floor(e)) for e in exact]
        remainders = [e - c for e, c in zip(exact, counts)]
        for _ in range(pool.size - sum(counts)):
            pick = max(range(3), key=lambda i: (remainders[i], -i))
            counts[pick] += 1
            remainders[pick] = -1.0
        offset = 0
        for part in range(3):
            parts[part].append(shuffled[offset : offset + counts[part]])
            offset += counts[part]
    train, val, test = (np.sort(np.concatenate(p)) for p in parts)
    return SplitPlan(train, val, test, tuple(fractions), rng)


def stratified_kfold(y: np.ndarray, k: int, rng: RngStream | int = 0) -> FoldPlan:
    """Fold assignment with per-class counts within 1 of proportionality.

    Leftover samples of each class go to the currently smallest folds, so
    total fold sizes also stay within 1 of each other.
    """
    y = np.asarray(y)
    if k < 2:
        raise ConfigError(f"k must be >= 2, got {k}")
    rng = as_stream(rng)
    gen = rng.generator()
    assignment = np.full(y.shape[0], -1, dtype=np.int64)
    fold_sizes = np.zeros(k, dtype=np.int64)
    for cls in (0, 1):
        pool = np.nonzero(y == cls)[0]
        if pool.size < k:
            raise DataError(f"class {cls} has {pool.size} samples; need at least k={k}")
        shuffled = gen.permutation(pool)
        base = pool.size // k
        extra = pool.size - base * k
        take = np.full(k, base, dtype=np.int64)
        order = np.lexsort((np.arange(k), fold_sizes))  # smallest fold first, ties by index
        take[order[:extra]] += 1
        offset = 0
        for fold in range(k):
            assignment[shuffled[offset : offset + take[fold]]] = fold
            offset += take[fold]
        fold_sizes += take
    return FoldPlan(k=k, assignment=assignment, seed=rng)


@dataclass(frozen=True)
class GridSearchResult:
    best_spec: ClassifierSpec
    best_objective: float
    objective: str
    entries: list[dict[str, Any]]  # one per lattice point: hyperparameters, score or error


def _objective_value(counts: ConfusionCounts, objective: str) -> float:
    if objective == "f1_macro":
        return compute_macro_metrics(counts).f1
    record = compute_metrics(counts)
    if not hasattr(record, objective):
        raise ConfigError(f"unknown objective {objective!r}")
    return getattr(record, objective)


def grid_search(
    kind: str,
    grid: Sequence[dict[str, Any]],
    X_train: np.ndarray,
    y_train: np.ndarray,
    X_val: np.ndarray,
    y_val: np.ndarray,
    objective: str = "f1",
    rng: RngStream | int = 0,
) -> GridSearchResult:
    """Evaluate every lattice point on the validation split; return the argmax.

    Point j trains with the substream of id j, so results do not depend on
    evaluation order.  Failed points are recorded and skipped; ties go to
    the earlier lattice point.
    """
    if not grid:
        raise ConfigError("hyperparameter grid is empty")
    rng = as_stream(rng)
    best: tuple[float, int] | None = None
    entries: list[dict[str, Any]] = []
    for j, hyper in enumerate(grid):
        entry: dict[str, Any] = {"hyperparameters": dict(hyper)}
        try:
            model = classifiers.train(ClassifierSpec(kind, dict(hyper)), X_train, y_train, rng.substream(j))
            counts = compute_confusion(classifiers.predict(model, X_val), y_val)
            score = _objective_value(counts, objective)
            entry["score"] = score
            if best is None or score > best[0]:
                best = (score, j)
        except HemopulseError as exc:
            entry["error"] = str(exc)
        entries.append(entry)
    if best is None:
        raise NumericError(
            f"grid search failed at every point for {kind}: "
            + "; ".join(e["error"] for e in entries)
        )
    return GridSearchResult(
        best_spec=ClassifierSpec(kind, dict(grid[best[1]])),
        best_objective=best[0],
        objective=objective,
        entries=entries,
    )


@dataclass(frozen=True)
class ReportRow:
    model: str
    space: str
    seed: int
    hyperparameters: dict[str, Any]
    accuracy: float
    precision: float
    recall: float
    specificity: float
    f1_binary: float
    f1_macro: float
    tp: int
    tn: int
    fp: int
    fn: int
    degenerate: tuple[str, ...]
    train_ms: float
    infer_us_per_sample: float


@dataclass(frozen=True)
class BenchmarkFailure:
    model: str
    space: str
    seed: int
    error: str


@dataclass(frozen=True)
class EvaluationReport:
    rows: list[ReportRow]
    failures: list[BenchmarkFailure]
    provenance: dict[str, Any]


def run_benchmark(
    cohort: Cohort,
    spaces: Sequence[str] = DEFAULT_SPACES,
    kinds: Sequence[str] = classifiers.KINDS,
    seeds: Sequence[int] | int = 0,
    k: int = 5,
    grids: dict[str, list[dict[str, Any]]] | None = None,
    threshold: float = DEFAULT_VARIANCE_THRESHOLD,
    reduced_frames: tuple[int, ...] | None = None,
    fractions: tuple[float, float, float] = DEFAULT_FRACTIONS,
    objective: str = "f1",
) -> EvaluationReport:
    """Train and score every (space, model) cell on a held-out test split.

    Per cell: grid search on the validation split, final fit on
    train+val with the chosen hyperparameters, metrics on test.
    """
    cohort.require_both_classes()
    if isinstance(seeds, (int, np.integer)):
        seeds = [int(seeds)]
    grids = {**DEFAULT_GRIDS, **(grids or {})}
    for kind in kinds:
        if kind not in classifiers.KINDS:
            raise ConfigError(f"unknown model kind {kind!r}")
        if not grids.get(kind):
            raise ConfigError(f"empty grid for model kind {kind!r}")

    rows: list[ReportRow] = []
    failures: list[BenchmarkFailure] = []
    for seed in seeds:
        root = RngStream(int(seed))
        plan = stratified_split(cohort.labels, fractions, root.substream(0))
        y = cohort.labels
        for si, space in enumerate(spaces):
            train_cohort = Cohort(
                cohort.features[plan.train_idx], y[plan.train_idx], cohort.feature_names
            )
            fsm = fit_feature_space(train_cohort, space, threshold, reduced_frames)
            matrices = {}
            for name, idx in (("train", plan.train_idx), ("val", plan.val_idx), ("test", plan.test_idx)):
                part = Cohort(cohort.features[idx], y[idx], cohort.feature_names)
                matrices[name] = apply_feature_space(fsm, part).features
            for ki, kind in enumerate(kinds):
                cell_rng = root.substream(1 + si * len(kinds) + ki)
                try:
                    rows.append(
                        _run_cell(
                            kind,
                            space,
                            seed,
                            grids[kind],
                            matrices,
                            (y[plan.train_idx], y[plan.val_idx], y[plan.test_idx]),
                            objective,
                            cell_rng,
                        )
                    )
                except HemopulseError as exc:
                    failures.append(BenchmarkFailure(kind, space, seed, str(exc)))

    healthy, tbi = cohort.class_counts()
    provenance = {
        "cohort_source": cohort.source,
        "n_samples": cohort.n_samples,
        "class_counts": {"healthy": healthy, "tbi": tbi},
        "spaces": list(spaces),
        "models": list(kinds),
        "seeds": [int(s) for s in seeds],
        "k": k,
        "variance_threshold": threshold,
        "reduced_frames": list(reduced_frames) if reduced_frames else None,
        "fractions": list(fractions),
        "objective": objective,
        "grids": {kind: grids[kind] for kind in kinds},
    }
    return EvaluationReport(rows=rows, failures=failures, provenance=provenance)


def _run_cell(
    kind: str,
    space: str,
    seed: int,
    grid: list[dict[str, Any]],
    matrices: dict[str, np.ndarray],
    labels: tuple[np.ndarray, np.ndarray, np.ndarray],
    objective: str,
    cell_rng: RngStream,
) -> ReportRow:
    y_train, y_val, y_test = labels
    search = grid_search(
        kind, grid, matrices["train"], y_train, matrices["val"], y_val, objective, cell_rng
    )
    X_fit = np.concatenate([matrices["train"], matrices["val"]])
    y_fit = np.concatenate([y_train, y_val])
    model = classifiers.train(
        search.best_spec, X_fit, y_fit, cell_rng.substream(len(grid)), feature_space=space
    )

    t0 = time.perf_counter()
    predicted = classifiers.predict(model, matrices["test"], input_space=space)
    infer_seconds = time.perf_counter() - t0

    counts = compute_confusion(predicted, y_test)
    binary = compute_metrics(counts)
    macro = compute_macro_metrics(counts)
    return ReportRow(
        model=kind,
        space=space,
        seed=seed,
        hyperparameters=model.spec.hyperparameters,
        accuracy=binary.accuracy,
        precision=binary.precision,
        recall=binary.recall,
        specificity=binary.specificity,
        f1_binary=binary.f1,
        f1_macro=macro.f1,
        tp=counts.tp,
        tn=counts.tn,
        fp=counts.fp,
        fn=counts.fn,
        degenerate=binary.degenerate,
        train_ms=model.meta.train_seconds * 1e3,
        infer_us_per_sample=infer_seconds * 1e6 / max(1, len(y_test)),
    )


def report_to_csv(report: EvaluationReport) -> str:
    lines = [CSV_HEADER]
    for r in report.rows:
        lines.append(
            ",".join(
                [
                    r.model,
                    r.space,
                    repr(r.accuracy),
                    repr(r.precision),
                    repr(r.recall),
                    repr(r.specificity),
                    repr(r.f1_binary),
                    repr(r.f1_macro),
                    str(r.tp),
                    str(r.tn),
                    str(r.fp),
                    str(r.fn),
                    repr(r.train_ms),
                    repr(r.infer_us_per_sample),
                ]
            )
        )
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CsvReportRecord:
    model: str
    space: str
    accuracy: float
    precision: float
    recall: float
    specificity: float
    f1_binary: float
    f1_macro: float
    tp: int
    tn: int
    fp: int
    fn: int
    train_ms: float
    infer_us_per_sample: float


def csv_records(report: EvaluationReport) -> list[CsvReportRecord]:
    """The in-memory view of exactly what report_to_csv writes."""
    return [
        CsvReportRecord(
            r.model,
            r.space,
            r.accuracy,
            r.precision,
            r.recall,
            r.specificity,
            r.f1_binary,
            r.f1_macro,
            r.tp,
            r.tn,
            r.fp,
            r.fn,
            r.train_ms,
            r.infer_us_per_sample,
        )
        for r in report.rows
    ]


def read_report_csv(path_or_text: str | Path) -> list[CsvReportRecord]:
    """Parse a benchmark CSV back into records (inverse of report_to_csv)."""
    if isinstance(path_or_text, Path) or "\n" not in str(path_or_text):
        text = Path(path_or_text).read_text(encoding="utf-8")
    else:
        text = str(path_or_text)
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise DataError("not a benchmark report CSV (bad header)")
    records = []
    for ln in lines[1:]:
        c = ln.split(",")
        if len(c) != 14:
            raise DataError(f"report row has {len(c)} columns, expected 14")
        records.append(
            CsvReportRecord(
                c[0],
                c[1],
                *(float(v) for v in c[2:8]),
                *(int(v) for v in c[8:12]),
                float(c[12]),
                float(c[13]),
            )
        )
    return records


def report_to_json(report: EvaluationReport) -> str:
    """Deterministic JSON document: rows without wall-clock timing, full provenance."""
    doc = {
        "format": "hemopulse-report",
        "version": 1,
        "provenance": report.provenance,
        "rows": [
            {
                "model": r.model,
                "space": r.space,
                "seed": r.seed,
                "hyperparameters": r.hyperparameters,
                "accuracy": r.accuracy,
                "precision": r.precision,
                "recall": r.recall,
                "specificity": r.specificity,
                "f1_binary": r.f1_binary,
                "f1_macro": r.f1_macro,
                "confusion": {"tp": r.tp, "tn": r.tn, "fp": r.fp, "fn": r.fn},
                "degenerate_metrics": list(r.degenerate),
            }
            for r in report.rows
        ],
        "failures": [
            {"model": f.model, "space": f.space, "seed": f.seed, "error": f.error}
            for f in report.failures
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
