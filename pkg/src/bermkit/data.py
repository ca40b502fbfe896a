"""Core containers and operations: raw datasets, standardized designs, fits.

Predictors are standardized to column mean 0 and *population* standard
deviation 1 (divide by n, not n-1).  With that convention every
standardized column satisfies ``x_j' x_j / n = 1``, which is what makes the
coordinate-descent update in :mod:`bermkit.solver` closed-form.  The
response is mean-centered, eliminating the intercept; predictions restore
it.  Coefficients therefore live on the standardized scale by default, with
a raw-scale back-transform available via :func:`raw_coefficients`.

Non-finite inputs are a hard error everywhere — silent imputation would
corrupt benchmark results.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConstantColumn, ConstantResponse, DimensionMismatch

__all__ = [
    "Dataset",
    "StandardizedDesign",
    "FitResult",
    "standardize",
    "destandardize",
    "predict",
    "raw_coefficients",
    "r_squared",
]


def _as_float_matrix(X, name: str) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-d, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise ValueError(f"{name} contains non-finite values")
    return X


def _as_float_vector(y, name: str) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-d, got shape {y.shape}")
    if not np.isfinite(y).all():
        raise ValueError(f"{name} contains non-finite values")
    return y


@dataclass(frozen=True)
class Dataset:
    """An immutable (X, y) pair with optional feature names."""

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...] | None = None

    def __post_init__(self):
        X = _as_float_matrix(self.X, "X")
        y = _as_float_vector(self.y, "y")
        if X.shape[0] != y.shape[0]:
            raise DimensionMismatch(
                f"X has {X.shape[0]} rows but y has {y.shape[0]}"
            )
        if self.feature_names is not None:
            names = tuple(str(n) for n in self.feature_names)
            if len(names) != X.shape[1]:
                raise DimensionMismatch(
                    f"{len(names)} feature names for {X.shape[1]} columns"
                )
            object.__setattr__(self, "feature_names", names)
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class StandardizedDesign:
    """A standardized design: Xs has column mean 0 and population SD 1.

    ``yc`` is the mean-centered response.  The original data are
    recoverable through ``col_means``/``col_scales``/``y_mean``
    (see :func:`destandardize`).
    """

    Xs: np.ndarray
    yc: np.ndarray
    col_means: np.ndarray
    col_scales: np.ndarray
    y_mean: float

    def __post_init__(self):
        for name in ("Xs", "yc", "col_means", "col_scales"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "y_mean", float(self.y_mean))
        if np.any(self.col_scales <= 0):
            j = int(np.argmax(self.col_scales <= 0))
            raise ConstantColumn(j)

    @property
    def n(self) -> int:
        return self.Xs.shape[0]

    @property
    def p(self) -> int:
        return self.Xs.shape[1]


@dataclass(frozen=True)
class FitResult:
    """A fitted penalized model on the standardized scale.

    ``selected`` is derived, never passed: a coefficient is selected exactly
    when it is nonzero.  ``flags`` carries out-of-band markers such as
    ``"empty_relevant_set"`` on degenerate screening outcomes.
    """

    beta: np.ndarray
    lam: float
    alpha: float
    method_tag: str
    flags: tuple[str, ...] = ()
    selected: np.ndarray = field(init=False)

    def __post_init__(self):
        beta = _as_float_vector(self.beta, "beta")
        if not self.lam >= 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        beta.setflags(write=False)
        selected = beta != 0.0
        selected.setflags(write=False)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "flags", tuple(self.flags))
        object.__setattr__(self, "selected", selected)

    @property
    def n_selected(self) -> int:
        return int(self.selected.sum())


def standardize(d: Dataset) -> StandardizedDesign:
    """Standardize predictors (population SD) and mean-center the response.

    Raises
    ------
    ConstantColumn
        If any column of ``d.X`` has zero variance.
    """
    col_means = d.X.mean(axis=0)
    col_scales = d.X.std(axis=0)  # population convention: ddof=0
    zero = col_scales == 0.0
    if zero.any():
        raise ConstantColumn(int(np.argmax(zero)))
    Xs = (d.X - col_means) / col_scales
    y_mean = float(d.y.mean())
    yc = d.y - y_mean
    return StandardizedDesign(
        Xs=Xs, yc=yc, col_means=col_means, col_scales=col_scales, y_mean=y_mean
    )


def destandardize(sd: StandardizedDesign) -> Dataset:
    """Invert :func:`standardize`, reconstructing the raw dataset."""
    X = sd.Xs * sd.col_scales + sd.col_means
    y = sd.yc + sd.y_mean
    return Dataset(X=X, y=y)


def predict(fit: FitResult, sd: StandardizedDesign, X_new) -> np.ndarray:
    """Predict responses for raw-scale rows ``X_new``.

    Applies the training standardization and restores the training response
    mean: ``y_mean + ((X_new - col_means) / col_scales) @ beta``.
    """
    X_new = _as_float_matrix(X_new, "X_new")
    if X_new.shape[1] != sd.p:
        raise DimensionMismatch(
            f"X_new has {X_new.shape[1]} columns, design has {sd.p}"
        )
    if fit.beta.shape[0] != sd.p:
        raise DimensionMismatch(
            f"fit has {fit.beta.shape[0]} coefficients, design has {sd.p}"
        )
    Z = (X_new - sd.col_means) / sd.col_scales
    return sd.y_mean + Z @ fit.beta


def raw_coefficients(fit: FitResult, sd: StandardizedDesign):
    """Back-transform standardized coefficients to the raw scale.

    Returns
    -------
    (intercept, beta_raw)
        such that predictions equal ``intercept + X_raw @ beta_raw``.
    """
    beta_raw = fit.beta / sd.col_scales
    intercept = sd.y_mean - float(beta_raw @ sd.col_means)
    return intercept, beta_raw


def r_squared(y_true, y_pred) -> float:
    """Coefficient of determination, 1 - SS_res / SS_tot.

    Raises
    ------
    ConstantResponse
        If ``y_true`` is constant (SS_tot = 0).
    """
    y_true = _as_float_vector(y_true, "y_true")
    y_pred = _as_float_vector(y_pred, "y_pred")
    if y_true.shape != y_pred.shape:
        raise DimensionMismatch(
            f"length mismatch: {y_true.shape[0]} vs {y_pred.shape[0]}"
        )
    if y_true.shape[0] < 2:
        raise DimensionMismatch("r_squared needs at least two observations")
    ss_tot = float(np.sum((y_true - y_true.mean()) ** 2))
    if ss_tot == 0.0:
        raise ConstantResponse("y_true is constant; R^2 undefined")
    ss_res = float(np.sum((y_true - y_pred) ** 2))
    return 1.0 - ss_res / ss_tot
