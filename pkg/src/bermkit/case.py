"""Case-study runner: fit a penalized model to a user-supplied CSV.

The dataset is a headed, comma-delimited, UTF-8 CSV.  One column is the
response; an optional group column partitions individuals (all other
columns are numeric predictors; missing values are not supported).  The
fitting group's rows are split train/test by a seeded shuffle, the model
is trained on the train block and scored on the test block, and the
fitted model then predicts every individual.  *Acceleration* is
``predicted − observed`` response per individual; for each evaluation
group the mean acceleration among individuals below ``age_threshold``
is compared against the fitting group's via a Welch two-sample t-test
(or Mann-Whitney by config).

Outputs (atomic writes, LF endings):

``selected_features.csv``   feature, coef_standardized, coef_raw
``predictions.csv``         row, group, split, observed, predicted, acceleration
``acceleration.csv``        per eval group: sizes, means, difference, test statistic, p-value
``diagnostics.csv``         per selected feature: standardized coefficient,
                            univariate skewness, max |Spearman| with the other
                            selected features, Spearman with the response
                            (computed over all fitting-group rows)
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ._rng import derive_seed
from .config import CaseStudyConfig
from .data import Dataset, predict, r_squared, raw_coefficients, standardize
from .errors import MissingColumn, TooFewRows, UnparseableCell
from .harness import write_csv
from .metrics import univariate_skewness
from .selection import baseline_fit, berm_fit
from .simulate import round_half_up

__all__ = ["run_case_study", "CaseReport", "read_case_csv"]

SELECTED_COLUMNS = ("feature", "coef_standardized", "coef_raw")
PREDICTION_COLUMNS = ("row", "group", "split", "observed", "predicted", "acceleration")
ACCELERATION_COLUMNS = (
    "group",
    "test",
    "n_group",
    "n_reference",
    "mean_acceleration_group",
    "mean_acceleration_reference",
    "difference",
    "statistic",
    "p_value",
)
DIAGNOSTIC_COLUMNS = (
    "feature",
    "coef_standardized",
    "skewness",
    "max_abs_corr_selected",
    "corr_response",
)

#: Minimum fitting-group rows (spec of the splitting protocol).
MIN_FIT_ROWS = 20
#: Minimum train-block rows after the split.
MIN_TRAIN_ROWS = 10


@dataclass(frozen=True)
class CaseReport:
    """Headline numbers of a case-study run (files carry the detail)."""

    output_dir: str
    method: str
    n_fit: int
    n_train: int
    n_test: int
    r2_test: float
    n_selected: int
    selected_features: tuple[str, ...]
    intercept: float
    acceleration: tuple[tuple, ...]  # rows of acceleration.csv


def read_case_csv(path, response_column, group_column=None):
    """Read a case CSV into (feature_names, X, y, groups, line_numbers).

    ``groups`` is None when no group column is configured; ``line_numbers``
    are 1-based file lines (the header is line 1).

    Raises
    ------
    MissingColumn
        Response or group column absent from the header.
    TooFewRows
        No header or no data rows.
    UnparseableCell
        A predictor/response cell that is not a decimal number, or a row
        with the wrong field count (reported at its first missing column).
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TooFewRows("CSV file is empty") from None
        raw_rows = [(i + 2, row) for i, row in enumerate(reader) if row]
    if response_column not in header:
        raise MissingColumn(response_column)
    if group_column is not None and group_column not in header:
        raise MissingColumn(group_column)
    if not raw_rows:
        raise TooFewRows("CSV has a header but no data rows")
    feature_names = [h for h in header if h != response_column and h != group_column]
    col_of = {h: j for j, h in enumerate(header)}

    def cell(line, row, name):
        if col_of[name] >= len(row):
            raise UnparseableCell(line, name)
        text = row[col_of[name]].strip()
        try:
            return float(text)
        except ValueError:
            raise UnparseableCell(line, name) from None

    n = len(raw_rows)
    X = np.empty((n, len(feature_names)))
    y = np.empty(n)
    groups = [] if group_column is not None else None
    lines = np.empty(n, dtype=np.int64)
    for i, (line, row) in enumerate(raw_rows):
        for j, name in enumerate(feature_names):
            X[i, j] = cell(line, row, name)
        y[i] = cell(line, row, response_column)
        if groups is not None:
            if col_of[group_column] >= len(row):
                raise UnparseableCell(line, group_column)
            groups.append(row[col_of[group_column]].strip())
        lines[i] = line
    return feature_names, X, y, groups, lines


def _spearman_matrix(X) -> np.ndarray:
    """Pairwise Spearman correlations (average ranks, ties included)."""
    ranks = stats.rankdata(X, axis=0)
    return np.corrcoef(ranks, rowvar=False)


def _spearman(x, y) -> float:
    return float(np.corrcoef(stats.rankdata(x), stats.rankdata(y))[0, 1])


def _compare_groups(accel_group, accel_ref, test):
    """(statistic, p_value) for a two-sample location comparison."""
    if test == "welch":
        if len(accel_group) < 2 or len(accel_ref) < 2:
            return None, None
        res = stats.ttest_ind(accel_group, accel_ref, equal_var=False)
        return float(res.statistic), float(res.pvalue)
    if len(accel_group) < 1 or len(accel_ref) < 1:
        return None, None
    res = stats.mannwhitneyu(accel_group, accel_ref, alternative="two-sided")
    return float(res.statistic), float(res.pvalue)


def run_case_study(cfg: CaseStudyConfig) -> CaseReport:
    """Fit, score, predict, and compare groups per the config."""
    feature_names, X, y, groups, lines = read_case_csv(
        cfg.data_path, cfg.response_column, cfg.group_column
    )
    n_rows = X.shape[0]
    if groups is None:
        fit_mask = np.ones(n_rows, dtype=bool)
    else:
        groups = np.asarray(groups)
        fit_mask = groups == cfg.fit_group
        for g in cfg.eval_groups:
            if not np.any(groups == g):
                raise TooFewRows(f"eval group '{g}' has no rows")
    fit_idx = np.flatnonzero(fit_mask)
    n_fit = fit_idx.size
    if n_fit < MIN_FIT_ROWS:
        raise TooFewRows(
            f"fitting group has {n_fit} rows; need at least {MIN_FIT_ROWS}"
        )
    n_test = max(1, round_half_up(cfg.test_fraction * n_fit))
    n_train = n_fit - n_test
    if n_train < MIN_TRAIN_ROWS:
        raise TooFewRows(
            f"train block would have {n_train} rows; need at least {MIN_TRAIN_ROWS}"
        )
    perm = np.random.default_rng(derive_seed(cfg.seed, "split")).permutation(n_fit)
    test_idx = np.sort(fit_idx[perm[:n_test]])
    train_idx = np.sort(fit_idx[perm[n_test:]])

    sd = standardize(
        Dataset(X=X[train_idx], y=y[train_idx], feature_names=tuple(feature_names))
    )
    fs = cfg.fit
    if cfg.method == "berm":
        fit, _ = berm_fit(
            sd,
            fs.alpha,
            fs.B,
            derive_seed(cfg.seed, "fit"),
            k_folds=fs.k_folds,
            n_lambda=fs.n_lambda,
            reuse_lambda=fs.reuse_lambda,
            tune_alpha=fs.tune_alpha,
        )
    else:
        fit = baseline_fit(
            sd,
            cfg.method,
            derive_seed(cfg.seed, "fit"),
            k_folds=fs.k_folds,
            n_lambda=fs.n_lambda,
        )
    intercept, beta_raw = raw_coefficients(fit, sd)
    r2_test = r_squared(y[test_idx], predict(fit, sd, X[test_idx]))

    selected = np.flatnonzero(fit.selected)
    selected_names = tuple(feature_names[j] for j in selected)

    os.makedirs(cfg.output_dir, exist_ok=True)
    write_csv(
        os.path.join(cfg.output_dir, "selected_features.csv"),
        SELECTED_COLUMNS,
        [(feature_names[j], fit.beta[j], beta_raw[j]) for j in selected],
    )

    # Predictions for the fitting group (marked train/test) and eval groups.
    pred_rows = []
    split_of = {int(i): "train" for i in train_idx}
    split_of.update({int(i): "test" for i in test_idx})
    eval_idx = []
    if groups is not None:
        for g in cfg.eval_groups:
            eval_idx.extend(int(i) for i in np.flatnonzero(groups == g))
    scored = sorted(split_of) + sorted(eval_idx)
    yhat = predict(fit, sd, X[scored]) if scored else np.empty(0)
    accel_all = np.full(n_rows, np.nan)
    for k, i in enumerate(scored):
        split = split_of.get(i, "eval")
        group_label = "" if groups is None else groups[i]
        accel = float(yhat[k] - y[i])
        accel_all[i] = accel
        pred_rows.append((int(lines[i]), group_label, split, y[i], float(yhat[k]), accel))
    write_csv(
        os.path.join(cfg.output_dir, "predictions.csv"), PREDICTION_COLUMNS, pred_rows
    )

    # Group acceleration comparison below the age threshold.
    accel_rows = []
    if groups is not None:
        under = (
            np.ones(n_rows, dtype=bool)
            if cfg.age_threshold is None
            else y < cfg.age_threshold
        )
        ref_mask = fit_mask & under
        a_ref = accel_all[ref_mask]
        for g in cfg.eval_groups:
            g_mask = (groups == g) & under
            a_g = accel_all[g_mask]
            statistic, p_value = _compare_groups(a_g, a_ref, cfg.comparison_test)
            mean_g = float(a_g.mean()) if a_g.size else None
            mean_ref = float(a_ref.mean()) if a_ref.size else None
            diff = (
                mean_g - mean_ref if mean_g is not None and mean_ref is not None else None
            )
            accel_rows.append(
                (
                    g,
                    cfg.comparison_test,
                    int(a_g.size),
                    int(a_ref.size),
                    mean_g,
                    mean_ref,
                    diff,
                    statistic,
                    p_value,
                )
            )
    write_csv(
        os.path.join(cfg.output_dir, "acceleration.csv"),
        ACCELERATION_COLUMNS,
        accel_rows,
    )

    # Distributional diagnostics over all fitting-group rows.
    diag_rows = []
    Xfit = X[fit_idx]
    yfit = y[fit_idx]
    corr = _spearman_matrix(Xfit[:, selected]) if selected.size > 1 else None
    for k, j in enumerate(selected):
        max_abs = (
            float(np.max(np.abs(np.delete(corr[k], k)))) if corr is not None else None
        )
        diag_rows.append(
            (
                feature_names[j],
                fit.beta[j],
                univariate_skewness(Xfit[:, j]),
                max_abs,
                _spearman(Xfit[:, j], yfit),
            )
        )
    write_csv(
        os.path.join(cfg.output_dir, "diagnostics.csv"), DIAGNOSTIC_COLUMNS, diag_rows
    )

    return CaseReport(
        output_dir=cfg.output_dir,
        method=cfg.method,
        n_fit=int(n_fit),
        n_train=int(n_train),
        n_test=int(n_test),
        r2_test=float(r2_test),
        n_selected=int(fit.n_selected),
        selected_features=selected_names,
        intercept=float(intercept),
        acceleration=tuple(accel_rows),
    )
