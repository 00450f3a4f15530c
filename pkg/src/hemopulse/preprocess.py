"""Standardization, correlation analysis, PCA, and feature-space construction.

The eigensolver is a cyclic Jacobi rotation scheme: at d = 31 it is fast,
dependency-free, and delivers directly testable orthonormality.  All
moments use sample (N-1) denominators.  Loading-vector signs follow a
largest-magnitude-entry-positive convention so fitted models reproduce
bit-for-bit across runs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .cohort import Cohort, N_FRAMES, STANDARD_FEATURE_NAMES
from .errors import ConfigError, DataError, NumericError

DEFAULT_VARIANCE_THRESHOLD = 0.95
DEFAULT_REDUCED_FRAMES: tuple[int, ...] = (2, 14, 28)

_CONSTANT_TOL = 1e-12
_JACOBI_TOL_FACTOR = 1e-11
_JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class FittedScaler:
    """Per-column z-score parameters: x -> (x - mean) / deviation."""

    means: np.ndarray
    deviations: np.ndarray
    constant_mask: np.ndarray

    @property
    def dim(self) -> int:
        return self.means.shape[0]


def fit_scaler(X: np.ndarray | Cohort) -> FittedScaler:
    """Fit column means and sample deviations; constant columns get deviation 1."""
    if isinstance(X, Cohort):
        X = X.features
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DataError("scaler fitting needs a matrix with at least 2 rows")
    means = X.mean(axis=0)
    deviations = X.std(axis=0, ddof=1)
    constant = deviations < _CONSTANT_TOL
    deviations = np.where(constant, 1.0, deviations)
    return FittedScaler(means=means, deviations=deviations, constant_mask=constant)


def transform(scaler: FittedScaler, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != scaler.dim:
        raise DataError(f"expected {scaler.dim} columns, got {X.shape[1] if X.ndim == 2 else X.shape}")
    return (X - scaler.means) / scaler.deviations


def inverse_transform(scaler: FittedScaler, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != scaler.dim:
        raise DataError(f"expected {scaler.dim} columns, got {X.shape[1] if X.ndim == 2 else X.shape}")
    return X * scaler.deviations + scaler.means


def correlation_matrix(X: np.ndarray) -> np.ndarray:
    """Pearson correlation r_ij = cov(X_i, X_j) / (sd_i * sd_j).

    Constant columns yield zero off-diagonal entries with 1 on the
    diagonal, keeping the matrix well-defined.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DataError("correlation needs a matrix with at least 2 rows")
    centered = X - X.mean(axis=0)
    sd = centered.std(axis=0, ddof=1)
    constant = sd < _CONSTANT_TOL
    safe_sd = np.where(constant, 1.0, sd)
    cov = centered.T @ centered / (X.shape[0] - 1)
    corr = cov / np.outer(safe_sd, safe_sd)
    corr[constant, :] = 0.0
    corr[:, constant] = 0.0
    np.fill_diagonal(corr, 1.0)
    return np.clip(corr, -1.0, 1.0)


def jacobi_eigh(C: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps until every off-diagonal magnitude drops below
    1e-11 * ||C||_F.  Returns (eigenvalues, V) with C ~ V diag(w) V^T,
    unsorted; columns of V are orthonormal.
    """
    A = np.array(C, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DataError("jacobi_eigh expects a square matrix")
    if not np.isfinite(A).all():
        raise DataError("jacobi_eigh input contains non-finite values")
    if not np.allclose(A, A.T, atol=1e-12 * (1.0 + np.abs(A).max())):
        raise DataError("jacobi_eigh input is not symmetric")
    d = A.shape[0]
    V = np.eye(d)
    if d == 1:
        return np.array([A[0, 0]]), V

    threshold = _JACOBI_TOL_FACTOR * np.linalg.norm(A, "fro")
    if threshold == 0.0:
        return np.zeros(d), V
    idx = np.arange(d)
    for _ in range(_JACOBI_MAX_SWEEPS):
        rotated = False
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = A[p, q]
                if abs(apq) <= threshold:
                    continue
                rotated = True
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                others = idx[(idx != p) & (idx != q)]
                akp = A[others, p].copy()
                akq = A[others, q].copy()
                A[others, p] = A[p, others] = c * akp - s * akq
                A[others, q] = A[q, others] = s * akp + c * akq
                A[p, p] -= t * apq
                A[q, q] += t * apq
                A[p, q] = A[q, p] = 0.0
                vp = V[:, p].copy()
                V[:, p] = c * vp - s * V[:, q]
                V[:, q] = s * vp + c * V[:, q]
        if not rotated:
            break
    else:
        off = np.abs(A - np.diag(np.diag(A))).max()
        raise NumericError(
            f"jacobi rotation did not converge in {_JACOBI_MAX_SWEEPS} sweeps "
            f"(max off-diagonal {off:.3e}, threshold {threshold:.3e})"
        )
    return np.diag(A).copy(), V


def retained_rank(eigenvalues: np.ndarray, threshold: float) -> int:
    """Smallest r whose leading eigenvalues explain >= threshold of the total."""
    lam = np.asarray(eigenvalues, dtype=np.float64)
    total = lam.sum()
    if total <= 0:
        raise DataError("total variance is zero; cannot select a rank")
    cumulative = np.cumsum(lam) / total
    return int(np.argmax(cumulative >= threshold)) + 1


@dataclass(frozen=True)
class PcaModel:
    eigenvalues: np.ndarray  # descending, length d
    loading_vectors: np.ndarray  # (d, d), columns are principal directions
    retained_rank: int
    variance_threshold: float
    fitted_scaler: FittedScaler | None = None


def fit_pca(
    X_scaled: np.ndarray,
    threshold: float = DEFAULT_VARIANCE_THRESHOLD,
    scaler: FittedScaler | None = None,
) -> PcaModel:
    """PCA of an already-standardized matrix via C = X^T X / (N-1).

    The scaler that produced X_scaled may be attached so downstream
    consumers can transform raw data consistently.
    """
    X = np.asarray(X_scaled, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DataError("pca needs a matrix with at least 2 rows")
    if not np.isfinite(X).all():
        raise DataError("pca input contains non-finite values")
    if not 0.0 < threshold <= 1.0:
        raise ConfigError(f"variance threshold must lie in (0, 1], got {threshold}")
    n, d = X.shape
    if n <= d:
        warnings.warn(
            f"pca fitted with N={n} <= d={d}; covariance estimate is rank-deficient",
            stacklevel=2,
        )
    C = X.T @ X / (n - 1)
    lam, V = jacobi_eigh(C)

    scale = max(np.linalg.norm(C, "fro"), 1.0)
    if lam.min() < -1e-8 * scale:
        raise NumericError(f"covariance produced eigenvalue {lam.min():.3e} < 0")
    lam = np.maximum(lam, 0.0)

    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    V = V[:, order]
    # Reproducible orientation: largest-magnitude entry of each column positive.
    for j in range(d):
        k = int(np.argmax(np.abs(V[:, j])))
        if V[k, j] < 0:
            V[:, j] = -V[:, j]

    return PcaModel(
        eigenvalues=lam,
        loading_vectors=V,
        retained_rank=retained_rank(lam, threshold),
        variance_threshold=threshold,
        fitted_scaler=scaler,
    )


def project(model: PcaModel, X_scaled: np.ndarray, r: int | None = None) -> np.ndarray:
    """Coordinates of standardized rows in the first r principal directions."""
    if r is None:
        r = model.retained_rank
    d = model.loading_vectors.shape[0]
    if not 1 <= r <= d:
        raise DataError(f"rank {r} outside [1, {d}]")
    X = np.asarray(X_scaled, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != d:
        raise DataError(f"expected {d} columns, got {X.shape[1] if X.ndim == 2 else X.shape}")
    return X @ model.loading_vectors[:, :r]


def reconstruct(model: PcaModel, Z: np.ndarray) -> np.ndarray:
    """Map r-dimensional scores back into the standardized space."""
    Z = np.asarray(Z, dtype=np.float64)
    r = Z.shape[1]
    return Z @ model.loading_vectors[:, :r].T


def explained_variance(model: PcaModel) -> np.ndarray:
    """Per-component share of total variance; non-negative, sums to 1."""
    total = model.eigenvalues.sum()
    if total <= 0:
        raise DataError("total variance is zero")
    return model.eigenvalues / total


def top_loading_frames(model: PcaModel, k: int) -> tuple[int, ...]:
    """The k frames (1-based) with the largest |loading| in the first component."""
    if model.loading_vectors.shape[0] != N_FRAMES + 1:
        raise DataError("loading-based frame selection needs a 31-feature model")
    if not 1 <= k <= N_FRAMES:
        raise ConfigError(f"k must lie in [1, {N_FRAMES}], got {k}")
    magnitudes = np.abs(model.loading_vectors[:N_FRAMES, 0])
    ranked = np.argsort(-magnitudes, kind="stable")[:k]
    return tuple(sorted(int(i) + 1 for i in ranked))


@dataclass(frozen=True)
class FeatureSpaceModel:
    """Fitted recipe turning a raw 31-feature cohort into one feature space.

    Fit on training rows only and applied unchanged elsewhere, so no
    statistic ever leaks out of the training split.
    """

    kind: str  # original | reduced | pca
    scaler: FittedScaler
    pca: PcaModel | None = None
    frames: tuple[int, ...] | None = None


def _validate_frames(frames) -> tuple[int, ...]:
    frames = tuple(int(f) for f in frames)
    if not frames:
        raise ConfigError("reduced feature space needs a non-empty frame list")
    bad = [f for f in frames if not 1 <= f <= N_FRAMES]
    if bad:
        raise ConfigError(f"frame indices must lie in [1, {N_FRAMES}]: {bad}")
    if len(set(frames)) != len(frames):
        raise ConfigError(f"duplicate frame indices: {frames}")
    return frames


def fit_feature_space(
    cohort: Cohort,
    kind: str,
    threshold: float = DEFAULT_VARIANCE_THRESHOLD,
    frames: tuple[int, ...] | None = None,
) -> FeatureSpaceModel:
    """Fit the preprocessing needed for one of the three compared spaces."""
    if kind not in ("original", "reduced", "pca"):
        raise ConfigError(f"unknown feature space kind {kind!r}")
    scaler = fit_scaler(cohort.features)
    pca = None
    if kind == "pca":
        pca = fit_pca(transform(scaler, cohort.features), threshold, scaler=scaler)
    chosen = None
    if kind == "reduced":
        chosen = _validate_frames(DEFAULT_REDUCED_FRAMES if frames is None else frames)
    return FeatureSpaceModel(kind=kind, scaler=scaler, pca=pca, frames=chosen)


def apply_feature_space(model: FeatureSpaceModel, cohort: Cohort) -> Cohort:
    """Transform any cohort with artifacts fitted elsewhere."""
    scaled = transform(model.scaler, cohort.features)
    if model.kind == "original":
        return Cohort(scaled, cohort.labels, cohort.feature_names, f"original<-{cohort.source}")
    if model.kind == "reduced":
        cols = [f - 1 for f in model.frames] + [cohort.dim - 1]
        names = tuple(cohort.feature_names[c] for c in cols)
        return Cohort(scaled[:, cols], cohort.labels, names, f"reduced<-{cohort.source}")
    Z = project(model.pca, scaled)
    names = tuple(f"pc{i:02d}" for i in range(1, Z.shape[1] + 1))
    return Cohort(Z, cohort.labels, names, f"pca<-{cohort.source}")


def build_feature_space(
    cohort: Cohort,
    kind: str,
    model: PcaModel | None = None,
    reduced_frames: tuple[int, ...] | None = None,
    threshold: float = DEFAULT_VARIANCE_THRESHOLD,
) -> Cohort:
    """One-call construction of a feature-space cohort.

    When a fitted PcaModel is supplied, its scaler (and for kind="pca" the
    model itself) transforms the cohort; otherwise everything is fitted on
    the cohort in place.  Benchmarks pass train-fitted models to avoid
    leakage; exploratory use may omit them.
    """
    if kind not in ("original", "reduced", "pca"):
        raise ConfigError(f"unknown feature space kind {kind!r}")
    if kind == "pca":
        if model is None:
            raise ConfigError("kind='pca' requires a fitted PcaModel")
        if model.fitted_scaler is None:
            raise ConfigError("the PcaModel lacks its upstream scaler")
        fsm = FeatureSpaceModel(kind="pca", scaler=model.fitted_scaler, pca=model)
        return apply_feature_space(fsm, cohort)
    scaler = model.fitted_scaler if model is not None and model.fitted_scaler is not None else fit_scaler(cohort.features)
    frames = None
    if kind == "reduced":
        frames = _validate_frames(DEFAULT_REDUCED_FRAMES if reduced_frames is None else reduced_frames)
    fsm = FeatureSpaceModel(kind=kind, scaler=scaler, frames=frames)
    return apply_feature_space(fsm, cohort)
