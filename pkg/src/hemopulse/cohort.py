"""Labeled waveform cohorts and their on-disk CSV form.

A cohort row is one cardiac cycle: 30 displacement frames plus the probe
recording angle, with a binary label (0 = healthy, 1 = hemorrhage).  The
in-memory type allows arbitrary dimensionality so PCA-projected feature
spaces can reuse it; the CSV schema is fixed to the 31-column layout

    f01,f02,...,f30,angle,label

with dot-decimal numbers, UTF-8 and LF line endings.  Floats are written
with shortest round-trip precision, so save -> load reproduces the matrix
bit-exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError

N_FRAMES = 30
STANDARD_FEATURE_NAMES: tuple[str, ...] = tuple(
    [f"f{i:02d}" for i in range(1, N_FRAMES + 1)] + ["angle"]
)
STANDARD_DIM = len(STANDARD_FEATURE_NAMES)  # 31


@dataclass(frozen=True)
class Cohort:
    """Immutable feature matrix with binary labels and provenance."""

    features: np.ndarray  # (N, d) float64
    labels: np.ndarray  # (N,) int64 in {0, 1}
    feature_names: tuple[str, ...]
    source: str = "unspecified"

    def __post_init__(self):
        feats = np.ascontiguousarray(np.asarray(self.features, dtype=np.float64))
        labels = np.asarray(self.labels, dtype=np.int64)
        if feats.ndim != 2:
            raise DataError("features must be a 2-d matrix")
        if labels.ndim != 1 or labels.shape[0] != feats.shape[0]:
            raise DataError("labels must be a vector with one entry per row")
        if feats.size and not np.isfinite(feats).all():
            raise DataError("features contain NaN or infinite values")
        if labels.size and not np.isin(labels, (0, 1)).all():
            raise DataError("labels contain values outside {0, 1}")
        if len(self.feature_names) != feats.shape[1]:
            raise DataError(
                f"{len(self.feature_names)} feature names for {feats.shape[1]} columns"
            )
        feats.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> tuple[int, int]:
        """(healthy, tbi) sample counts."""
        n_tbi = int(np.count_nonzero(self.labels == 1))
        return self.n_samples - n_tbi, n_tbi

    def require_both_classes(self) -> None:
        healthy, tbi = self.class_counts()
        if healthy == 0 or tbi == 0:
            raise DataError(
                f"both classes required, got {healthy} healthy / {tbi} tbi samples"
            )

    def space_tag(self) -> str:
        """Best-effort name of the feature space this cohort lives in."""
        names = self.feature_names
        if names == STANDARD_FEATURE_NAMES:
            return "original"
        if names and all(n.startswith("pc") for n in names):
            return "pca"
        if names and names[-1] == "angle":
            return "reduced"
        return "unknown"


def _parse_cell(text: str, row: int, col_name: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DataError(f"row {row}: non-numeric value {text!r} in column {col_name}") from None
    if math.isnan(value) or math.isinf(value):
        raise DataError(f"row {row}: non-finite value {text!r} in column {col_name}")
    return value


def load_cohort(path: str | Path) -> Cohort:
    """Read a cohort from the documented 31-feature CSV schema."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"cohort file not found: {path}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise DataError(f"{path}: empty file, expected a header line")

    expected = list(STANDARD_FEATURE_NAMES) + ["label"]
    header = lines[0].split(",")
    if header != expected:
        missing = [c for c in expected if c not in header]
        extra = [c for c in header if c not in expected]
        detail = []
        if missing:
            detail.append(f"missing columns: {', '.join(missing)}")
        if extra:
            detail.append(f"unexpected columns: {', '.join(extra)}")
        if not detail:
            detail.append("columns out of order")
        raise DataError(f"{path}: malformed header ({'; '.join(detail)})")

    rows = []
    labels = []
    for lineno, line in enumerate(lines[1:], start=1):
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != len(expected):
            raise DataError(
                f"{path}: row {lineno} has {len(cells)} columns, expected {len(expected)}"
            )
        rows.append([_parse_cell(c, lineno, expected[k]) for k, c in enumerate(cells[:-1])])
        label_val = _parse_cell(cells[-1], lineno, "label")
        if label_val not in (0.0, 1.0):
            raise DataError(f"{path}: row {lineno} label {cells[-1]!r} outside {{0, 1}}")
        labels.append(int(label_val))

    features = np.array(rows, dtype=np.float64).reshape(len(rows), STANDARD_DIM)
    return Cohort(
        features=features,
        labels=np.array(labels, dtype=np.int64),
        feature_names=STANDARD_FEATURE_NAMES,
        source=str(path),
    )


def save_cohort(cohort: Cohort, path: str | Path) -> None:
    """Write a standard-schema cohort; inverse of load_cohort."""
    if cohort.feature_names != STANDARD_FEATURE_NAMES:
        raise DataError(
            "only 31-column cohorts (f01..f30, angle) can be saved to the CSV schema; "
            f"got feature space '{cohort.space_tag()}' with d={cohort.dim}"
        )
    path = Path(path)
    header = ",".join(list(STANDARD_FEATURE_NAMES) + ["label"])
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(header + "\n")
            for i in range(cohort.n_samples):
                cells = [repr(float(v)) for v in cohort.features[i]]
                cells.append(str(int(cohort.labels[i])))
                fh.write(",".join(cells) + "\n")
    except OSError as exc:
        raise DataError(f"cannot write cohort to {path}: {exc}") from exc
