"""Builders and introspection helpers shared by the figure tests.

The builders write CSV files that follow the bermkit report schemas with
deterministic, easily recomputable cell values, so tests can assert that
plotted coordinates equal the CSV cells exactly (no tolerance).
"""

from __future__ import annotations

import csv
from pathlib import Path

from matplotlib.collections import LineCollection, PathCollection

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

DIAGNOSTIC_COLUMNS = (
    "feature",
    "coef_standardized",
    "skewness",
    "max_abs_corr_selected",
    "corr_response",
)

SPARSITIES = (0.25, 0.5, 0.75)
SIGMAS = (1.0, 1.5, 3.0)
METHODS = ("berm", "lasso", "enet")


def scenario_name(sparsity: float, sigma: float) -> str:
    return f"moderate-complex-s{sparsity:g}-sig{sigma:g}"


def _cell_values(sparsity, sigma, method, shift):
    idx = METHODS.index(method) if method in METHODS else 9
    return {
        "mean_balanced_accuracy": round(
            0.52 + 0.07 * idx + 0.10 * sparsity - 0.04 * sigma + shift, 6
        ),
        "se_balanced_accuracy": round(0.01 + 0.002 * idx, 6),
        "mean_selection_delta": round(idx - 2 + 0.5 * sigma - sparsity + shift, 6),
        "se_selection_delta": round(0.2 + 0.05 * idx, 6),
        "n_mse_defined": 20,
        "mean_mse_selected": round(0.6 + 0.2 * idx + 0.3 * sigma * sparsity + shift, 6),
        "se_mse_selected": round(0.03 + 0.004 * idx, 6),
        "mean_n_selected": round(8.0 + idx, 6),
        "se_n_selected": 0.5,
    }


def write_summary(
    path: Path,
    *,
    methods=METHODS,
    sparsities=SPARSITIES,
    sigmas=SIGMAS,
    blank_methods=(),
    shift=0.0,
    scenario_of=scenario_name,
) -> Path:
    """Write a suite summary CSV over the given grid.

    Methods listed in ``blank_methods`` get empty value cells (the shape a
    suite produces when a method contributed no usable rows).  ``shift``
    offsets every numeric value, which lets tests build a pair of files
    with known differences.
    """
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for sparsity in sparsities:
            for sigma in sigmas:
                for method in methods:
                    if method in blank_methods:
                        row = dict.fromkeys(SUMMARY_COLUMNS[3:], "")
                        row["n_mse_defined"] = 0
                    else:
                        row = _cell_values(sparsity, sigma, method, shift)
                    writer.writerow(
                        [
                            scenario_of(sparsity, sigma),
                            method,
                            0 if method in blank_methods else 20,
                        ]
                        + [row[c] for c in SUMMARY_COLUMNS[3:]]
                    )
    return path


def write_diagnostics(path: Path, *, n=8, offset=0.0) -> Path:
    """Write a case-study diagnostics CSV with ``n`` deterministic rows."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(DIAGNOSTIC_COLUMNS)
        for i in range(n):
            writer.writerow(
                [
                    f"marker_{i + 1:02d}",
                    round(((-1) ** i) * (0.2 + 0.1 * i) + offset, 6),
                    round(0.3 * i - 1.0 + offset, 6),
                    round(0.1 + 0.05 * i, 6),
                    round(0.15 * i - 0.5 + offset, 6),
                ]
            )
    return path


def read_cells(path) -> list[dict[str, str]]:
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


def cell(path, scenario: str, method: str, column: str) -> str:
    """Raw cell value for one (scenario, method) row of a summary CSV."""
    for row in read_cells(path):
        if row["scenario"] == scenario and row["method"] == method:
            return row[column]
    raise KeyError((scenario, method))


def line_series(fig) -> dict[tuple[int, str], tuple[list[float], list[float]]]:
    """Extract plotted line data: (facet index, series label) -> (xs, ys).

    Errorbar series carry their label on the ErrorbarContainer; its first
    line is the data line.
    """
    series = {}
    for facet, ax in enumerate(fig.axes):
        for container in ax.containers:
            label = str(container.get_label())
            if label.startswith("_"):
                continue
            data_line = container.lines[0]
            xs = [float(x) for x in data_line.get_xdata()]
            ys = [float(y) for y in data_line.get_ydata()]
            series[(facet, label)] = (xs, ys)
    return series


def scatter_groups(fig) -> list[list[tuple[float, float]]]:
    """Extract scatter offsets per PathCollection, in draw order."""
    groups = []
    for ax in fig.axes:
        for collection in ax.collections:
            if isinstance(collection, PathCollection):
                groups.append(
                    [(float(x), float(y)) for x, y in collection.get_offsets()]
                )
    return groups


def median_bar_count(fig) -> int:
    return sum(
        isinstance(c, LineCollection) for ax in fig.axes for c in ax.collections
    )
