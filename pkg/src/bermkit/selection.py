"""Bootstrap relevance screening, the two-step BERM estimator, and baselines.

Step 1 (screening) fits an elastic net on ``B`` bootstrap resamples of the
data — each resample re-standardized and re-tuned by cross-validation — and
forms a per-coefficient 95% percentile interval.  A variable is *relevant*
exactly when its interval excludes zero.

Step 2 (refit) solves a weighted elastic net on the full data in which
relevant variables carry unit weight and irrelevant ones carry infinite
weight (exact exclusion), with the penalty level re-tuned by
cross-validation over the surviving columns.

Baselines: ``lasso``, ``enet``, and the adaptive variants ``alasso`` /
``aenet`` whose penalty weights are ``1 / (|beta_init| + tau)``.

Determinism contract
--------------------
Every random stream is derived from the caller's ``seed`` with
:func:`bermkit._rng.derive_seed` and a fixed label:

==============================  ============================================
stream                          label
==============================  ============================================
bootstrap resample ``b``        ``(seed, "b", b, attempt)``
replicate CV folds              ``(seed, "cv", b, attempt)``
shared-lambda CV (fast mode)    ``(seed, "cv-shared")``
step-2 CV folds                 ``(seed, "step2-cv")``
alpha-tuning CV folds           ``(seed, "alpha-cv")``
baseline CV folds               ``(seed, "cv")``
adaptive init / final CV folds  ``(seed, "init-cv")`` / ``(seed, "final-cv")``
==============================  ============================================

Replicates therefore own independent streams indexed by ``b`` and results
are identical however the replicate loop is scheduled (see ``threads``).
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._rng import derive_seed
from .data import (
    Dataset,
    FitResult,
    StandardizedDesign,
    destandardize,
    raw_coefficients,
    standardize,
)
from .errors import (
    ConstantColumn,
    DegenerateResample,
    DimensionMismatch,
    EmptyRelevantSet,
)
from .solver import DEFAULT_MAX_ITER, DEFAULT_TOL, PenaltyConfig, cd_fit, cv_select_lambda

__all__ = [
    "BootstrapSummary",
    "relevance_from_ci",
    "bootstrap_coefficients",
    "berm_fit",
    "baseline_fit",
    "BASELINE_METHODS",
]

#: Percentile pair defining the 95% bootstrap interval.
CI_PERCENTILES = (2.5, 97.5)

#: Number of fresh draws allowed after a degenerate resample.
MAX_REDRAWS = 10

#: Baseline method name -> elastic-net mixing parameter of the final fit.
_FINAL_ALPHA = {"lasso": 1.0, "enet": 0.5, "alasso": 1.0, "aenet": 0.5}

#: Adaptive baselines reweight by ``1 / (|beta_init| + TAU) ** GAMMA``.
_ADAPTIVE_TAU = 1e-6
_ADAPTIVE_GAMMA = 1.0

#: Ridge-like mixing parameter of the adaptive baselines' initial fit.
_INIT_ALPHA = 1e-3

#: Candidate mixing parameters for the optional alpha-tuning mode.
ALPHA_GRID = tuple(round(0.1 * i, 1) for i in range(1, 10))

BASELINE_METHODS = tuple(_FINAL_ALPHA)


# ---------------------------------------------------------------------------
# Relevance
# ---------------------------------------------------------------------------


def relevance_from_ci(ci_lower, ci_upper) -> np.ndarray:
    """Mark coefficients whose closed interval excludes zero.

    ``r_j`` is true exactly when ``0 not in [ci_lower_j, ci_upper_j]``;
    an endpoint exactly at zero therefore yields ``r_j = False``.  The
    map is monotone: widening an interval never turns an irrelevant
    coefficient relevant.
    """
    lo = np.atleast_1d(np.asarray(ci_lower, dtype=np.float64))
    hi = np.atleast_1d(np.asarray(ci_upper, dtype=np.float64))
    if lo.shape != hi.shape:
        raise DimensionMismatch(
            f"ci_lower has shape {lo.shape} but ci_upper has shape {hi.shape}"
        )
    bad = lo > hi
    if bad.any():
        j = int(np.argmax(bad))
        raise ValueError(
            f"ci_lower exceeds ci_upper at index {j}: [{lo[j]}, {hi[j]}]"
        )
    return (lo > 0.0) | (hi < 0.0)


@dataclass(frozen=True)
class BootstrapSummary:
    """Percentile summary of ``B`` bootstrap coefficient fits.

    ``coef_samples`` holds the replicate coefficients on the *raw*
    predictor scale (each replicate's standardized fit divided by that
    resample's own column scales) so rows share a common scale even
    though every resample is standardized with its own statistics.
    ``ci_lower`` / ``ci_upper`` are the 2.5th / 97.5th percentiles
    (linear interpolation between order statistics) and ``relevance``
    is :func:`relevance_from_ci` of those endpoints.
    """

    B: int
    coef_samples: np.ndarray
    ci_lower: np.ndarray
    ci_upper: np.ndarray
    relevance: np.ndarray

    def __post_init__(self):
        coef = np.ascontiguousarray(self.coef_samples, dtype=np.float64)
        lo = np.ascontiguousarray(self.ci_lower, dtype=np.float64)
        hi = np.ascontiguousarray(self.ci_upper, dtype=np.float64)
        rel = np.ascontiguousarray(self.relevance, dtype=bool)
        if coef.ndim != 2:
            raise DimensionMismatch(
                f"coef_samples must be 2-d, got shape {coef.shape}"
            )
        B, p = coef.shape
        if self.B != B:
            raise DimensionMismatch(
                f"B is {self.B} but coef_samples has {B} rows"
            )
        for name, arr in (("ci_lower", lo), ("ci_upper", hi), ("relevance", rel)):
            if arr.shape != (p,):
                raise DimensionMismatch(
                    f"{name} must have shape ({p},), got {arr.shape}"
                )
        if np.any(lo > hi):
            j = int(np.argmax(lo > hi))
            raise ValueError(f"ci_lower exceeds ci_upper at index {j}")
        if not np.array_equal(rel, relevance_from_ci(lo, hi)):
            raise ValueError("relevance is inconsistent with the interval endpoints")
        for name, arr in (
            ("coef_samples", coef),
            ("ci_lower", lo),
            ("ci_upper", hi),
            ("relevance", rel),
        ):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "B", int(B))

    @property
    def n_relevant(self) -> int:
        return int(self.relevance.sum())


# ---------------------------------------------------------------------------
# Step 1: bootstrap screening
# ---------------------------------------------------------------------------


def _fit_one_replicate(
    X,
    y,
    b,
    *,
    alpha,
    k_folds,
    seed,
    shared_lambda,
    n_lambda,
    index_sampler,
    tol,
    max_iter,
):
    """Fit replicate ``b``, redrawing on degenerate resamples.

    Returns the raw-scale coefficient vector.  A resample whose
    standardization (or whose CV folds) hits a constant column is
    redrawn from a fresh stream; after :data:`MAX_REDRAWS` redraws the
    replicate fails hard with :class:`DegenerateResample`.
    """
    n = X.shape[0]
    for attempt in range(MAX_REDRAWS + 1):
        rng = np.random.default_rng(derive_seed(seed, "b", b, attempt))
        if index_sampler is None:
            idx = rng.integers(0, n, size=n)
        else:
            idx = np.asarray(index_sampler(rng, b, attempt), dtype=np.intp)
        try:
            rsd = standardize(Dataset(X=X[idx], y=y[idx]))
            if shared_lambda is None:
                cv = cv_select_lambda(
                    rsd,
                    alpha,
                    k=k_folds,
                    seed=derive_seed(seed, "cv", b, attempt),
                    n_lambda=n_lambda,
                    tol=tol,
                    max_iter=max_iter,
                )
                lam = cv.lambda_best
            else:
                lam = shared_lambda
            fit = cd_fit(
                rsd,
                PenaltyConfig(alpha=alpha, lam=lam),
                tol=tol,
                max_iter=max_iter,
                method_tag="bootstrap",
            )
        except ConstantColumn:
            continue
        _, beta_raw = raw_coefficients(fit, rsd)
        return beta_raw
    raise DegenerateResample(b)


def bootstrap_coefficients(
    sd: StandardizedDesign,
    alpha: float = 0.5,
    B: int = 100,
    k_folds: int = 10,
    seed: int = 0,
    *,
    reuse_lambda: bool = False,
    n_lambda: int = 100,
    threads: int = 1,
    index_sampler=None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> BootstrapSummary:
    """Screen variables by bootstrap percentile intervals.

    For each replicate ``b`` (an independent stream derived from
    ``(seed, b)``) draw ``n`` rows with replacement, re-standardize the
    resample, tune λ by ``k_folds``-fold CV on the resample, fit the
    elastic net at the chosen λ with unit weights, and record the
    raw-scale coefficients.  The 2.5th/97.5th percentiles across
    replicates give the interval; relevance is its zero-exclusion.

    Parameters
    ----------
    reuse_lambda:
        Fast mode: tune λ once on the full data and reuse it for every
        replicate instead of re-tuning per resample.
    threads:
        Fit replicates in a thread pool of this size.  Results are
        bit-identical for any value because each replicate owns a
        derived stream and aggregation is by replicate index.
    index_sampler:
        Optional ``(rng, b, attempt) -> index array`` hook replacing the
        with-replacement draw; a deterministic seam for diagnostics and
        degenerate-percentile checks.

    Raises
    ------
    DegenerateResample
        If a replicate produced a constant predictor column on
        :data:`MAX_REDRAWS` + 1 consecutive draws.
    """
    if B < 2:
        raise ValueError(f"B must be at least 2, got {B}")
    raw = destandardize(sd)
    X, y = raw.X, raw.y
    shared_lambda = None
    if reuse_lambda:
        shared_lambda = cv_select_lambda(
            sd,
            alpha,
            k=k_folds,
            seed=derive_seed(seed, "cv-shared"),
            n_lambda=n_lambda,
            tol=tol,
            max_iter=max_iter,
        ).lambda_best

    def one(b):
        return _fit_one_replicate(
            X,
            y,
            b,
            alpha=alpha,
            k_folds=k_folds,
            seed=seed,
            shared_lambda=shared_lambda,
            n_lambda=n_lambda,
            index_sampler=index_sampler,
            tol=tol,
            max_iter=max_iter,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, range(B)))
    else:
        rows = [one(b) for b in range(B)]
    coef = np.vstack(rows)
    lo, hi = np.percentile(coef, CI_PERCENTILES, axis=0, method="linear")
    return BootstrapSummary(
        B=B,
        coef_samples=coef,
        ci_lower=lo,
        ci_upper=hi,
        relevance=relevance_from_ci(lo, hi),
    )


# ---------------------------------------------------------------------------
# Step 2: weighted refit
# ---------------------------------------------------------------------------


def _select_alpha(sd, *, k_folds, seed, n_lambda, tol, max_iter) -> float:
    """Pick the mixing parameter from :data:`ALPHA_GRID` by CV error.

    All candidates share one fold assignment so their error curves are
    comparable; ties break toward the smaller alpha (first minimum).
    """
    best_alpha = None
    best_err = np.inf
    for a in ALPHA_GRID:
        cv = cv_select_lambda(
            sd, a, k=k_folds, seed=seed, n_lambda=n_lambda, tol=tol, max_iter=max_iter
        )
        err = float(cv.cv_mean_error.min())
        if err < best_err:
            best_alpha, best_err = a, err
    return best_alpha


def berm_fit(
    sd: StandardizedDesign,
    alpha: float = 0.5,
    B: int = 100,
    seed: int = 0,
    *,
    k_folds: int = 10,
    reuse_lambda: bool = False,
    n_lambda: int = 100,
    threads: int = 1,
    tune_alpha: bool = False,
    index_sampler=None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[FitResult, BootstrapSummary]:
    """Two-step fit: bootstrap screening, then a weighted refit.

    Step 1 is :func:`bootstrap_coefficients`.  Step 2 sets weight 1 on
    relevant variables and ∞ on irrelevant ones (exact exclusion),
    re-tunes λ by CV restricted to the relevant columns, and solves the
    weighted elastic net on the full data.  The fitted support is always
    contained in the relevant set.

    With ``tune_alpha`` the mixing parameter is first chosen from
    :data:`ALPHA_GRID` by full-data CV (off by default; ``alpha`` is
    ignored in that mode).

    If no variable survives screening, an :class:`EmptyRelevantSet`
    warning is emitted and the fit is the all-zero model flagged
    ``"empty_relevant_set"``.
    """
    if tune_alpha:
        alpha = _select_alpha(
            sd,
            k_folds=k_folds,
            seed=derive_seed(seed, "alpha-cv"),
            n_lambda=n_lambda,
            tol=tol,
            max_iter=max_iter,
        )
    summary = bootstrap_coefficients(
        sd,
        alpha,
        B,
        k_folds,
        seed,
        reuse_lambda=reuse_lambda,
        n_lambda=n_lambda,
        threads=threads,
        index_sampler=index_sampler,
        tol=tol,
        max_iter=max_iter,
    )
    if not summary.relevance.any():
        warnings.warn(
            "no variable survived bootstrap screening; returning the zero model",
            EmptyRelevantSet,
            stacklevel=2,
        )
        fit = FitResult(
            beta=np.zeros(sd.p),
            lam=0.0,
            alpha=alpha,
            method_tag="berm",
            flags=("empty_relevant_set",),
        )
        return fit, summary
    weights = np.where(summary.relevance, 1.0, np.inf)
    cv = cv_select_lambda(
        sd,
        alpha,
        weights=weights,
        k=k_folds,
        seed=derive_seed(seed, "step2-cv"),
        n_lambda=n_lambda,
        tol=tol,
        max_iter=max_iter,
    )
    fit = cd_fit(
        sd,
        PenaltyConfig(alpha=alpha, lam=cv.lambda_best, weights=weights),
        tol=tol,
        max_iter=max_iter,
        method_tag="berm",
    )
    return fit, summary


# ---------------------------------------------------------------------------
# Baselines
# ---------------------------------------------------------------------------


def baseline_fit(
    sd: StandardizedDesign,
    method: str,
    seed: int = 0,
    *,
    k_folds: int = 10,
    n_lambda: int = 100,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> FitResult:
    """Fit one of the baseline penalized estimators.

    ``lasso`` / ``enet`` are CV-tuned elastic nets at α = 1 / 0.5 with
    unit weights.  ``alasso`` / ``aenet`` are two-stage: a ridge-like
    initial fit (α = 0.001, CV-tuned λ) yields ``beta_init``, the final
    fit at α = 1 / 0.5 uses weights ``1 / (|beta_init| + 1e-6)`` and a
    freshly CV-tuned λ.
    """
    if method not in _FINAL_ALPHA:
        raise ValueError(
            f"unknown method {method!r}; expected one of {sorted(_FINAL_ALPHA)}"
        )
    final_alpha = _FINAL_ALPHA[method]
    if method in ("lasso", "enet"):
        cv = cv_select_lambda(
            sd,
            final_alpha,
            k=k_folds,
            seed=derive_seed(seed, "cv"),
            n_lambda=n_lambda,
            tol=tol,
            max_iter=max_iter,
        )
        return cd_fit(
            sd,
            PenaltyConfig(alpha=final_alpha, lam=cv.lambda_best),
            tol=tol,
            max_iter=max_iter,
            method_tag=method,
        )
    init_cv = cv_select_lambda(
        sd,
        _INIT_ALPHA,
        k=k_folds,
        seed=derive_seed(seed, "init-cv"),
        n_lambda=n_lambda,
        tol=tol,
        max_iter=max_iter,
    )
    init = cd_fit(
        sd,
        PenaltyConfig(alpha=_INIT_ALPHA, lam=init_cv.lambda_best),
        tol=tol,
        max_iter=max_iter,
        method_tag=f"{method}-init",
    )
    weights = 1.0 / (np.abs(init.beta) + _ADAPTIVE_TAU) ** _ADAPTIVE_GAMMA
    cv = cv_select_lambda(
        sd,
        final_alpha,
        weights=weights,
        k=k_folds,
        seed=derive_seed(seed, "final-cv"),
        n_lambda=n_lambda,
        tol=tol,
        max_iter=max_iter,
    )
    return cd_fit(
        sd,
        PenaltyConfig(alpha=final_alpha, lam=cv.lambda_best, weights=weights),
        tol=tol,
        max_iter=max_iter,
        method_tag=method,
    )
