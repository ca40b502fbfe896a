"""Selection/estimation quality scores and distributional diagnostics.

Selection is scored against the true support with a confusion table,
balanced accuracy, and the selected-count delta; estimation with the mean
squared error over the *accurately selected* set A = {j : selected_j and
beta_true_j != 0}. False positives are excluded from that set by default —
their true coefficient is zero, so including them would conflate selection
and estimation error — but an FP-inclusive variant is available behind a
flag for sensitivity analysis.

Distributional diagnostics use population (1/n) moment denominators
throughout, consistent with the standardizer.  The multivariate skewness

    b1p = (1/n²) Σ_i Σ_j [ (x_i − x̄)ᵀ S⁻¹ (x_j − x̄) ]³

is computed via a whitening factorization and blocked matrix products, so
the full n×n Mahalanobis kernel is never materialized (n = 20,000 works in
a few hundred MB).  Kurtosis is b2p = (1/n) Σ_i [Mahalanobis²_i]².
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import SingularCovariance, UndefinedClass, ZeroVariance

__all__ = [
    "SelectionConfusion",
    "MetricsReport",
    "confusion",
    "balanced_accuracy",
    "balanced_accuracy_with_fallback",
    "selection_delta",
    "mse_selected",
    "score_selection",
    "univariate_skewness",
    "mardia_skewness",
    "mardia_kurtosis",
]


@dataclass(frozen=True)
class SelectionConfusion:
    """Confusion counts for support recovery (tp+fp+tn+fn = p)."""

    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "fp", "tn", "fn"):
            v = getattr(self, name)
            if v < 0:
                raise ValueError(f"{name} must be nonnegative, got {v}")
            object.__setattr__(self, name, int(v))

    @property
    def p(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricsReport:
    """Full per-fit selection/estimation scorecard.

    ``balanced_accuracy`` falls back to plain accuracy when a truth class
    is empty; ``ba_is_fallback`` marks that explicitly.  ``mse_selected``
    is None exactly when there are no true positives.
    """

    confusion: SelectionConfusion
    balanced_accuracy: float
    ba_is_fallback: bool
    selection_delta: int
    mse_selected: float | None
    n_selected: int


def confusion(selected, support_true) -> SelectionConfusion:
    """Count selection outcomes against the true support."""
    selected = np.asarray(selected, dtype=bool)
    support_true = np.asarray(support_true, dtype=bool)
    if selected.shape != support_true.shape:
        raise ValueError(
            f"length mismatch: {selected.shape} vs {support_true.shape}"
        )
    return SelectionConfusion(
        tp=int(np.sum(selected & support_true)),
        fp=int(np.sum(selected & ~support_true)),
        tn=int(np.sum(~selected & ~support_true)),
        fn=int(np.sum(~selected & support_true)),
    )


def balanced_accuracy(c: SelectionConfusion) -> float:
    """0.5 * (sensitivity + specificity).

    Raises
    ------
    UndefinedClass
        When the truth is all-nonzero or all-zero (an empty class).
    """
    if c.tp + c.fn == 0 or c.tn + c.fp == 0:
        raise UndefinedClass(
            "balanced accuracy undefined: a truth class is empty "
            f"(tp+fn={c.tp + c.fn}, tn+fp={c.tn + c.fp})"
        )
    return 0.5 * (c.tp / (c.tp + c.fn) + c.tn / (c.tn + c.fp))


def balanced_accuracy_with_fallback(c: SelectionConfusion) -> tuple[float, bool]:
    """Balanced accuracy, or plain accuracy (marked) when undefined."""
    try:
        return balanced_accuracy(c), False
    except UndefinedClass:
        return (c.tp + c.tn) / c.p, True


def selection_delta(c: SelectionConfusion) -> int:
    """Selected count minus true support size: (tp+fp) − (tp+fn)."""
    return (c.tp + c.fp) - (c.tp + c.fn)


def mse_selected(
    beta_true, beta_hat, selected, include_false_positives: bool = False
) -> float | None:
    """Mean squared coefficient error over the accurately selected set.

    A = {j : selected_j and beta_true_j != 0}; returns None when A is
    empty.  With ``include_false_positives`` the set widens to all
    selected j (sensitivity-analysis variant).
    """
    beta_true = np.asarray(beta_true, dtype=np.float64)
    beta_hat = np.asarray(beta_hat, dtype=np.float64)
    selected = np.asarray(selected, dtype=bool)
    if not (beta_true.shape == beta_hat.shape == selected.shape):
        raise ValueError("beta_true, beta_hat, selected must share a shape")
    A = selected if include_false_positives else selected & (beta_true != 0)
    if not A.any():
        return None
    return float(np.mean((beta_true[A] - beta_hat[A]) ** 2))


def score_selection(beta_true, beta_hat) -> MetricsReport:
    """Assemble the full scorecard for an estimated coefficient vector."""
    beta_true = np.asarray(beta_true, dtype=np.float64)
    beta_hat = np.asarray(beta_hat, dtype=np.float64)
    sel = beta_hat != 0
    c = confusion(sel, beta_true != 0)
    ba, fallback = balanced_accuracy_with_fallback(c)
    return MetricsReport(
        confusion=c,
        balanced_accuracy=ba,
        ba_is_fallback=fallback,
        selection_delta=selection_delta(c),
        mse_selected=mse_selected(beta_true, beta_hat, sel),
        n_selected=int(sel.sum()),
    )


def univariate_skewness(x) -> float:
    """m3 / m2^(3/2) with population central moments.

    Raises
    ------
    ZeroVariance
        When the sample has zero variance.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] < 3:
        raise ValueError("univariate_skewness needs a 1-d sample of length >= 3")
    d = x - x.mean()
    m2 = np.mean(d**2)
    if m2 == 0.0:
        raise ZeroVariance("sample has zero variance; skewness undefined")
    m3 = np.mean(d**3)
    return float(m3 / m2**1.5)


def _whiten(X) -> np.ndarray:
    """Rows whitened against the population-denominator sample covariance.

    Returns W with W @ W.T equal to the Mahalanobis kernel matrix
    Xc S⁻¹ Xcᵀ.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be 2-d")
    n, p = X.shape
    if n <= p:
        raise SingularCovariance(
            f"sample covariance singular by construction: n={n} <= p={p}"
        )
    Xc = X - X.mean(axis=0)
    S = Xc.T @ Xc / n
    try:
        L = np.linalg.cholesky(S)
    except np.linalg.LinAlgError:
        raise SingularCovariance("sample covariance is not positive definite")
    return solve_triangular(L, Xc.T, lower=True).T


def _skew_from_whitened_gram(W: np.ndarray, block_rows: int) -> float:
    """b1p via the pairwise Gram route: O(n²p) time, O(block_rows · n) memory."""
    n = W.shape[0]
    total = 0.0
    for i0 in range(0, n, block_rows):
        G = W[i0 : i0 + block_rows] @ W.T
        np.power(G, 3, out=G)
        total += float(G.sum())
    return total / (n * n)


def _skew_from_whitened_tensor(W: np.ndarray) -> float:
    """b1p via the third-moment tensor identity: O(n·p³) time, O(p²) memory.

    sum_ij (w_i·w_j)³ equals the squared Frobenius norm of the p×p×p
    tensor T_abc = sum_i w_ia w_ib w_ic, so the n×n Gram matrix is never
    formed.  Algebraically identical to the Gram route.
    """
    n, p = W.shape
    total = 0.0
    for a in range(p):
        Ta = W.T @ (W * W[:, a : a + 1])
        total += float(np.sum(Ta * Ta))
    return total / (n * n)


def mardia_skewness(X, block_rows: int = 512) -> float:
    """Mardia multivariate skewness b1p (population denominators).

    Two algebraically identical evaluation routes, chosen by cost: the
    third-moment-tensor contraction (O(n·p³)) when p² ≤ n, otherwise the
    blocked pairwise Gram sum (O(n²·p)).
    """
    W = _whiten(X)
    n, p = W.shape
    if p * p <= n:
        return _skew_from_whitened_tensor(W)
    return _skew_from_whitened_gram(W, block_rows)


def mardia_kurtosis(X) -> float:
    """Mardia multivariate kurtosis b2p (population denominators)."""
    W = _whiten(X)
    d = np.einsum("ij,ij->i", W, W)
    return float(np.mean(d**2))
