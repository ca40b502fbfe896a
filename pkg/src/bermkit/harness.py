"""Scenario-suite runner: replicate scheduling, scoring, CSV reports.

Each cell of a suite is one (scenario, replicate, method) triple.  The
data realization seed is ``H(base_seed, scenario_name, replicate)`` —
method-independent, so every method scores the same draw — and the fit
seed adds the method tag, so adding methods to a config never perturbs
other cells.  One covariance realization is pinned per scenario
(``H(base_seed, scenario_name, "cov")``) so replicates share a matrix.

Outputs (written atomically, LF endings, stable column order):

``results.csv``
    one row per successful cell: confusion counts, balanced accuracy,
    selection delta, MSE over accurately selected coefficients, selected
    count, achieved Mardia statistics.  Byte-identical across reruns and
    thread counts.
``summary.csv``
    per (scenario, method): means and standard errors aggregated from
    ``results.csv`` rows.
``errors.csv``
    one row per failed cell (the cell is skipped, the suite continues).
``timings.csv``
    per-cell wall time.  Kept out of ``results.csv`` so determinism is
    byte-exact there; this file varies run to run by nature.
"""

from __future__ import annotations

import csv
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ._rng import derive_seed
from .config import SuiteConfig
from .data import raw_coefficients, standardize
from .errors import EmptyRelevantSet
from .metrics import score_selection
from .selection import baseline_fit, berm_fit
from .simulate import realize_scenario

__all__ = ["run_suite", "SuiteReport", "RESULT_COLUMNS", "SUMMARY_COLUMNS"]

RESULT_COLUMNS = (
    "scenario",
    "replicate",
    "method",
    "tp",
    "fp",
    "tn",
    "fn",
    "balanced_accuracy",
    "ba_is_fallback",
    "selection_delta",
    "mse_selected",
    "n_selected",
    "achieved_skewness",
    "achieved_kurtosis",
)

SUMMARY_COLUMNS = (
    "scenario",
    "method",
    "n_rows",
    "mean_balanced_accuracy",
    "se_balanced_accuracy",
    "mean_selection_delta",
    "se_selection_delta",
    "n_mse_defined",
    "mean_mse_selected",
    "se_mse_selected",
    "mean_n_selected",
    "se_n_selected",
)

ERROR_COLUMNS = ("scenario", "replicate", "method", "stage", "error", "message")
TIMING_COLUMNS = ("scenario", "replicate", "method", "seconds")


@dataclass(frozen=True)
class SuiteReport:
    """What a suite run produced and where it landed."""

    output_dir: str
    n_cells: int
    n_ok: int
    n_failed: int

    @property
    def results_path(self) -> str:
        return os.path.join(self.output_dir, "results.csv")

    @property
    def summary_path(self) -> str:
        return os.path.join(self.output_dir, "summary.csv")


def _fmt(v) -> str:
    """Canonical CSV cell: shortest round-trip floats, 0/1 booleans."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, header, rows) -> None:
    """Write a CSV atomically: temp file in place, then rename."""
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    os.replace(tmp, path)


def _run_cell(scenario, replicate, cfg: SuiteConfig):
    """Realize one (scenario, replicate) and fit every method on it.

    Returns (result_rows, error_rows, timing_rows).  A realization
    failure skips all methods of the cell; a fit failure skips only
    that method.  Empty-relevant-set warnings are expected on noisy
    cells and stay out of the error report (the zero model is scored).
    """
    name = scenario.name
    fs = cfg.fit
    results, errors, timings = [], [], []
    pinned = replace(
        scenario,
        seed=derive_seed(cfg.base_seed, name, replicate),
        cov_seed=derive_seed(cfg.base_seed, name, "cov"),
        beta_seed=(
            derive_seed(cfg.base_seed, name, "beta-fixed") if fs.fix_beta else None
        ),
    )
    try:
        sim = realize_scenario(pinned)
        sd = standardize(sim.dataset)
    except Exception as exc:  # noqa: BLE001 — cell isolation is the contract
        for m in cfg.methods:
            errors.append((name, replicate, m, "realize", type(exc).__name__, str(exc)))
        return results, errors, timings
    for m in cfg.methods:
        fit_seed = derive_seed(cfg.base_seed, name, replicate, m)
        t0 = time.perf_counter()
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", EmptyRelevantSet)
                if m == "berm":
                    fit, _ = berm_fit(
                        sd,
                        fs.alpha,
                        fs.B,
                        fit_seed,
                        k_folds=fs.k_folds,
                        n_lambda=fs.n_lambda,
                        reuse_lambda=fs.reuse_lambda,
                        tune_alpha=fs.tune_alpha,
                    )
                else:
                    fit = baseline_fit(
                        sd, m, fit_seed, k_folds=fs.k_folds, n_lambda=fs.n_lambda
                    )
        except Exception as exc:  # noqa: BLE001
            errors.append((name, replicate, m, "fit", type(exc).__name__, str(exc)))
            continue
        timings.append((name, replicate, m, time.perf_counter() - t0))
        _, beta_raw = raw_coefficients(fit, sd)
        rep = score_selection(sim.beta_true, beta_raw)
        results.append(
            (
                name,
                replicate,
                m,
                rep.confusion.tp,
                rep.confusion.fp,
                rep.confusion.tn,
                rep.confusion.fn,
                rep.balanced_accuracy,
                rep.ba_is_fallback,
                rep.selection_delta,
                rep.mse_selected,
                rep.n_selected,
                sim.achieved_skewness,
                sim.achieved_kurtosis,
            )
        )
    return results, errors, timings


def _mean_se(values):
    """(mean, standard error) with ddof=1; SE empty below two values."""
    if not values:
        return None, None
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    if arr.size < 2:
        return mean, None
    return mean, float(arr.std(ddof=1) / np.sqrt(arr.size))


def _summarize(cfg: SuiteConfig, result_rows):
    """Aggregate results rows into per-(scenario, method) summary rows."""
    by_cell: dict[tuple[str, str], list] = {
        (s.name, m): [] for s in cfg.scenarios for m in cfg.methods
    }
    for row in result_rows:
        by_cell[(row[0], row[2])].append(row)
    out = []
    for (scen, method) in sorted(by_cell):
        rows = by_cell[(scen, method)]
        ba_mean, ba_se = _mean_se([r[7] for r in rows])
        sdel_mean, sdel_se = _mean_se([r[9] for r in rows])
        mse_vals = [r[10] for r in rows if r[10] is not None]
        mse_mean, mse_se = _mean_se(mse_vals)
        nsel_mean, nsel_se = _mean_se([r[11] for r in rows])
        out.append(
            (
                scen,
                method,
                len(rows),
                ba_mean,
                ba_se,
                sdel_mean,
                sdel_se,
                len(mse_vals),
                mse_mean,
                mse_se,
                nsel_mean,
                nsel_se,
            )
        )
    return out


def run_suite(cfg: SuiteConfig) -> SuiteReport:
    """Run every (scenario, replicate, method) cell and write the reports.

    Cells are scheduled across a bounded thread pool; every random
    stream is derived per cell, so output is identical for any
    ``threads`` value and any scenario order in the config (rows are
    sorted by (scenario, replicate, method) before writing).
    """
    os.makedirs(cfg.output_dir, exist_ok=True)
    units = [(s, r) for s in cfg.scenarios for r in range(cfg.replicates)]
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            outputs = list(pool.map(lambda u: _run_cell(*u, cfg), units))
    else:
        outputs = [_run_cell(s, r, cfg) for s, r in units]
    results, errors, timings = [], [], []
    for res, err, tim in outputs:
        results.extend(res)
        errors.extend(err)
        timings.extend(tim)
    order = lambda row: (row[0], row[1], row[2])  # noqa: E731
    results.sort(key=order)
    errors.sort(key=order)
    timings.sort(key=order)
    write_csv(os.path.join(cfg.output_dir, "results.csv"), RESULT_COLUMNS, results)
    write_csv(
        os.path.join(cfg.output_dir, "summary.csv"),
        SUMMARY_COLUMNS,
        _summarize(cfg, results),
    )
    write_csv(os.path.join(cfg.output_dir, "errors.csv"), ERROR_COLUMNS, errors)
    write_csv(os.path.join(cfg.output_dir, "timings.csv"), TIMING_COLUMNS, timings)
    n_cells = len(units) * len(cfg.methods)
    return SuiteReport(
        output_dir=cfg.output_dir,
        n_cells=n_cells,
        n_ok=len(results),
        n_failed=len(errors),
    )
