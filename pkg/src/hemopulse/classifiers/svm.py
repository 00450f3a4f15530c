"""Soft-margin kernel SVM solved by sequential minimal optimization.

The solver is Platt's SMO with deterministic working-pair selection: the
first index comes from ascending scans over KKT violators, the second
from the largest |E_i - E_j| gap among non-bound points with ascending
fallback scans, so a given problem always optimizes along the same path.
Convergence means a full pass finds no KKT violation above the tolerance.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError, NumericError

KKT_TOL = 1e-3
MAX_PASSES = 10_000
_SUPPORT_FLOOR = 1e-10


def kernel_function(kernel: str, gamma: float, degree: int):
    """Returns k(A, B) -> (len(A), len(B)) Gram block for the named kernel."""
    if kernel == "linear":
        return lambda A, B: A @ B.T
    if kernel == "polynomial":
        return lambda A, B: (gamma * (A @ B.T) + 1.0) ** degree
    if kernel == "rbf":

        def rbf(A, B):
            sq = (
                (A * A).sum(axis=1)[:, None]
                + (B * B).sum(axis=1)[None, :]
                - 2.0 * (A @ B.T)
            )
            return np.exp(-gamma * np.maximum(sq, 0.0))

        return rbf
    raise ConfigError(f"unknown kernel {kernel!r}")


def kkt_violations(alpha: np.ndarray, margins: np.ndarray, c: float) -> np.ndarray:
    """Per-sample violation of the dual optimality conditions.

    margins holds y_i * f(x_i).  At alpha = 0 the margin must be >= 1, at
    alpha = c it must be <= 1, and strictly inside it must equal 1.
    """
    eps = 1e-10 * c
    at_zero = alpha <= eps
    at_c = alpha >= c - eps
    viol = np.abs(margins - 1.0)
    viol[at_zero] = np.maximum(0.0, 1.0 - margins[at_zero])
    viol[at_c] = np.maximum(0.0, margins[at_c] - 1.0)
    return viol


def smo_solve(
    K: np.ndarray, t: np.ndarray, c: float, tol: float = KKT_TOL, max_passes: int = MAX_PASSES
) -> tuple[np.ndarray, float, int]:
    """Maximize the dual of the soft-margin SVM; returns (alpha, b, passes)."""
    n = K.shape[0]
    alpha = np.zeros(n)
    g = np.zeros(n)  # g_k = sum_m alpha_m t_m K[m, k]
    b = 0.0
    eps = 1e-10 * c

    def take_step(i: int, j: int) -> bool:
        nonlocal b, g
        if i == j:
            return False
        ai, aj = alpha[i], alpha[j]
        ti, tj = t[i], t[j]
        ei = g[i] + b - ti
        ej = g[j] + b - tj
        s = ti * tj
        if s > 0:
            lo, hi = max(0.0, ai + aj - c), min(c, ai + aj)
        else:
            lo, hi = max(0.0, aj - ai), min(c, c + aj - ai)
        if hi - lo < 1e-12:
            return False
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if eta <= 1e-12:
            return False  # coincident points; another partner will make progress
        aj_new = aj + tj * (ei - ej) / eta
        aj_new = min(max(aj_new, lo), hi)
        if abs(aj_new - aj) < 1e-12 * (aj_new + aj + 1e-12):
            return False
        ai_new = min(max(ai + s * (aj - aj_new), 0.0), c)
        b1 = b - ei - ti * (ai_new - ai) * K[i, i] - tj * (aj_new - aj) * K[i, j]
        b2 = b - ej - ti * (ai_new - ai) * K[i, j] - tj * (aj_new - aj) * K[j, j]
        if eps < ai_new < c - eps:
            b = b1
        elif eps < aj_new < c - eps:
            b = b2
        else:
            b = (b1 + b2) / 2.0
        g_delta = ti * (ai_new - ai) * K[i] + tj * (aj_new - aj) * K[j]
        g += g_delta
        alpha[i], alpha[j] = ai_new, aj_new
        return True

    def examine(i: int) -> bool:
        ti = t[i]
        ri = ti * (g[i] + b) - 1.0  # margin - 1
        violates = (ri < -tol and alpha[i] < c - eps) or (ri > tol and alpha[i] > eps)
        if not violates:
            return False
        errors = g + b - t
        non_bound = np.nonzero((alpha > eps) & (alpha < c - eps))[0]
        if non_bound.size > 0:
            j = int(non_bound[np.argmax(np.abs(errors[i] - errors[non_bound]))])
            if take_step(i, j):
                return True
        for j in non_bound:
            if take_step(i, int(j)):
                return True
        for j in range(n):
            if take_step(i, j):
                return True
        return False

    passes = 0
    examine_all = True
    while passes < max_passes:
        passes += 1
        if examine_all:
            targets = range(n)
        else:
            targets = np.nonzero((alpha > eps) & (alpha < c - eps))[0]
        n_changed = sum(examine(int(i)) for i in targets)
        if examine_all:
            if n_changed == 0:
                break
            examine_all = False
        elif n_changed == 0:
            examine_all = True
    else:
        raise NumericError(f"SMO did not converge within {max_passes} passes")

    max_viol = float(kkt_violations(alpha, t * (g + b), c).max())
    if max_viol > tol:
        raise NumericError(
            f"SMO stalled after {passes} passes with max KKT violation {max_viol:.3e}"
        )
    return alpha, b, passes


def fit_svm(
    X: np.ndarray, y01: np.ndarray, c: float, kernel: str, gamma: float | None, degree: int
) -> dict:
    t = np.where(y01 == 1, 1.0, -1.0)
    if gamma is None:
        gamma = 1.0 / X.shape[1]
    kfun = kernel_function(kernel, gamma, degree)
    K = kfun(X, X)
    alpha, b, passes = smo_solve(K, t, c)
    keep = alpha > _SUPPORT_FLOOR
    return {
        "kernel": kernel,
        "gamma": float(gamma),
        "degree": int(degree),
        "c": float(c),
        "bias": float(b),
        "support_vectors": X[keep].copy(),
        "support_targets": t[keep],
        "support_alphas": alpha[keep],
        "passes": int(passes),
    }


def svm_score(params: dict, X: np.ndarray) -> np.ndarray:
    """Decision function sum_i alpha_i t_i k(x_i, x) + b."""
    sv = np.asarray(params["support_vectors"])
    if sv.shape[0] == 0:
        return np.full(X.shape[0], params["bias"])
    kfun = kernel_function(params["kernel"], params["gamma"], params["degree"])
    coeffs = np.asarray(params["support_alphas"]) * np.asarray(params["support_targets"])
    return kfun(X, sv) @ coeffs + params["bias"]
