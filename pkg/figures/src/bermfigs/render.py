"""Figure construction and rendering.

Each figure kind maps one or more report CSV files onto a matplotlib
figure.  Plotted values are taken verbatim from the CSV cells — no
rescaling, aggregation, or smoothing happens here — so a point on a
figure can always be traced back to a row in the input file.

Kinds
-----
``balanced_accuracy``, ``selection_delta``, ``mse``
    One benchmark ``summary.csv``.  Panels are faceted by sparsity with
    the noise level on the x axis and one line per method; the grid cell
    is recovered from the harness scenario names.
``simple_vs_complex_diff``
    Two ``summary.csv`` files — the first from the simple-design suite,
    the second from the complex-design suite.  Plots the per-method
    difference in mean balanced accuracy (simple minus complex) on the
    matching grid cells.
``coef_vs_age_correlation``
    One case-study ``diagnostics.csv``.  Scatter of the standardized
    coefficient of each selected feature against its marginal correlation
    with the response.
``skewness_by_group``
    One or more case-study ``diagnostics.csv`` files.  Strip plot of
    selected-feature skewness, one labeled group per input file, with a
    median bar per group.
"""

from __future__ import annotations

import statistics
import warnings
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
# Fixed hash salt keeps SVG element ids (and so whole files) reproducible.
matplotlib.rcParams["svg.hashsalt"] = "bermfigs"

import matplotlib.pyplot as plt

from .schema import (
    SchemaMismatch,
    distinct_labels,
    parse_float,
    parse_scenario_name,
    read_rows,
)
from .style import GRID_KW, group_color, method_color, method_order

FIGURE_KINDS = (
    "selection_delta",
    "balanced_accuracy",
    "mse",
    "simple_vs_complex_diff",
    "coef_vs_age_correlation",
    "skewness_by_group",
)

FORMATS = ("svg", "png")

# value column, standard-error column, y label, draw a zero reference line
_SUMMARY_KINDS = {
    "balanced_accuracy": (
        "mean_balanced_accuracy",
        "se_balanced_accuracy",
        "balanced accuracy (mean over replicates)",
        False,
    ),
    "selection_delta": (
        "mean_selection_delta",
        "se_selection_delta",
        "selection delta (mean over replicates)",
        True,
    ),
    "mse": (
        "mean_mse_selected",
        "se_mse_selected",
        "MSE on selected support (mean over replicates)",
        False,
    ),
}

# inclusive (min, max) number of input files per kind; None = unbounded
_INPUT_ARITY = {
    "balanced_accuracy": (1, 1),
    "selection_delta": (1, 1),
    "mse": (1, 1),
    "simple_vs_complex_diff": (2, 2),
    "coef_vs_age_correlation": (1, 1),
    "skewness_by_group": (1, None),
}


@dataclass(frozen=True)
class FigureSpec:
    """A single figure request: what to plot, from where, to where."""

    kind: str
    inputs: tuple[str, ...]
    output: str
    format: str = "svg"

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(
                f"unknown figure kind {self.kind!r}; expected one of {', '.join(FIGURE_KINDS)}"
            )
        if self.format not in FORMATS:
            raise ValueError(
                f"unknown format {self.format!r}; expected one of {', '.join(FORMATS)}"
            )
        if isinstance(self.inputs, (str, Path)):
            object.__setattr__(self, "inputs", (str(self.inputs),))
        else:
            object.__setattr__(self, "inputs", tuple(str(p) for p in self.inputs))
        lo, hi = _INPUT_ARITY[self.kind]
        n = len(self.inputs)
        if n < lo or (hi is not None and n > hi):
            expected = f"exactly {lo}" if lo == hi else f"at least {lo}"
            raise ValueError(
                f"figure kind {self.kind!r} takes {expected} input CSV(s), got {n}"
            )


def render(spec: FigureSpec) -> Path:
    """Build the figure and write it to ``spec.output``.

    The output file is overwritten if it already exists; inputs are only
    ever read.  Returns the output path.
    """
    fig = build_figure(spec)
    out = Path(spec.output)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    # Dropping the date stamp makes SVG output byte-stable across reruns.
    metadata = {"Date": None} if spec.format == "svg" else None
    fig.savefig(out, format=spec.format, dpi=150, metadata=metadata)
    plt.close(fig)
    return out


def build_figure(spec: FigureSpec):
    """Construct (but do not save) the matplotlib Figure for ``spec``."""
    if spec.kind in _SUMMARY_KINDS:
        return _summary_figure(spec)
    if spec.kind == "simple_vs_complex_diff":
        return _diff_figure(spec)
    if spec.kind == "coef_vs_age_correlation":
        return _coef_correlation_figure(spec)
    return _skewness_figure(spec)


# ---------------------------------------------------------------------------
# faceted line figures from suite summaries


def _load_summary_points(path, value_col, se_col):
    """Map (sparsity, method) -> sorted [(sigma, value, se)] from one summary."""
    rows = read_rows(path, ("scenario", "method", value_col, se_col))
    points: dict[tuple[float, str], list[tuple[float, float, float | None]]] = {}
    seen: set[str] = set()
    for row in rows:
        method = row["method"]
        seen.add(method)
        value = parse_float(row, value_col, path=path)
        if value is None:
            continue
        sparsity, sigma = parse_scenario_name(row["scenario"], path=path)
        se = parse_float(row, se_col, path=path)
        points.setdefault((sparsity, method), []).append((sigma, value, se))
    plotted = {m for (_s, m) in points}
    for method in sorted(seen - plotted):
        warnings.warn(
            f"{path}: method {method!r} has no {value_col} values; series omitted",
            stacklevel=3,
        )
    return points


def _line_panels(points, *, ylabel, zero_line):
    """One row of panels faceted by sparsity, sigma on x, one line per method."""
    sparsities = sorted({s for (s, _m) in points})
    methods = method_order({m for (_s, m) in points})
    ncols = max(len(sparsities), 1)
    fig, axes = plt.subplots(
        1,
        ncols,
        figsize=(1.2 + 3.4 * ncols, 3.8),
        sharey=True,
        squeeze=False,
        constrained_layout=True,
    )
    for ax, sparsity in zip(axes[0], sparsities):
        for method in methods:
            pts = sorted(points.get((sparsity, method), []))
            if not pts:
                continue
            xs = [sigma for sigma, _v, _se in pts]
            ys = [value for _sigma, value, _se in pts]
            ses = [se for _sigma, _v, se in pts]
            yerr = ses if all(se is not None for se in ses) else None
            ax.errorbar(
                xs,
                ys,
                yerr=yerr,
                marker="o",
                markersize=4,
                linewidth=1.4,
                capsize=2,
                color=method_color(method),
                label=method,
            )
        if zero_line:
            ax.axhline(0.0, color="#444444", linewidth=0.8, linestyle="--")
        ax.set_title(f"sparsity {sparsity:g}")
        ax.set_xlabel("noise level (sigma)")
        ax.grid(True, **GRID_KW)
    axes[0][0].set_ylabel(ylabel)
    if not points:
        warnings.warn("no plottable rows; figure is empty", stacklevel=3)
    handles, labels = [], []
    for ax in axes[0]:
        for handle, label in zip(*ax.get_legend_handles_labels()):
            if label not in labels:
                handles.append(handle)
                labels.append(label)
    if handles:
        fig.legend(handles, labels, loc="outside right center", title="method")
    return fig


def _summary_figure(spec):
    value_col, se_col, ylabel, zero_line = _SUMMARY_KINDS[spec.kind]
    points = _load_summary_points(spec.inputs[0], value_col, se_col)
    return _line_panels(points, ylabel=ylabel, zero_line=zero_line)


def _diff_figure(spec):
    simple_path, complex_path = spec.inputs

    def table(path):
        rows = read_rows(path, ("scenario", "method", "mean_balanced_accuracy"))
        cells: dict[tuple[float, float, str], float] = {}
        seen: set[str] = set()
        for row in rows:
            seen.add(row["method"])
            value = parse_float(row, "mean_balanced_accuracy", path=path)
            if value is None:
                continue
            sparsity, sigma = parse_scenario_name(row["scenario"], path=path)
            cells[(sparsity, sigma, row["method"])] = value
        return cells, seen

    simple_cells, simple_seen = table(simple_path)
    complex_cells, complex_seen = table(complex_path)
    points: dict[tuple[float, str], list[tuple[float, float, None]]] = {}
    for key in simple_cells.keys() & complex_cells.keys():
        sparsity, sigma, method = key
        diff = simple_cells[key] - complex_cells[key]
        points.setdefault((sparsity, method), []).append((sigma, diff, None))
    plotted = {m for (_s, m) in points}
    for method in sorted((simple_seen | complex_seen) - plotted):
        warnings.warn(
            f"method {method!r} has no grid cells present in both summaries; "
            "series omitted",
            stacklevel=2,
        )
    return _line_panels(
        points,
        ylabel="balanced accuracy difference (simple − complex)",
        zero_line=True,
    )


# ---------------------------------------------------------------------------
# case-study diagnostics figures


def _coef_correlation_figure(spec):
    path = spec.inputs[0]
    rows = read_rows(path, ("feature", "coef_standardized", "corr_response"))
    xs, ys, names = [], [], []
    for row in rows:
        x = parse_float(row, "corr_response", path=path)
        y = parse_float(row, "coef_standardized", path=path)
        if x is None or y is None:
            warnings.warn(
                f"{path}: feature {row['feature']!r} has a blank cell; point omitted",
                stacklevel=2,
            )
            continue
        xs.append(x)
        ys.append(y)
        names.append(row["feature"])
    fig, ax = plt.subplots(figsize=(5.0, 4.2), constrained_layout=True)
    ax.axhline(0.0, color="#444444", linewidth=0.8, linestyle="--")
    ax.axvline(0.0, color="#444444", linewidth=0.8, linestyle="--")
    ax.scatter(xs, ys, color="#4477aa", zorder=3)
    for name, x, y in zip(names, xs, ys):
        ax.annotate(name, (x, y), xytext=(4, 4), textcoords="offset points", fontsize=7)
    ax.set_xlabel("correlation with response")
    ax.set_ylabel("standardized coefficient")
    ax.grid(True, **GRID_KW)
    if not xs:
        warnings.warn(f"{path}: no plottable rows; figure is empty", stacklevel=2)
    return fig


def _skewness_figure(spec):
    labels = distinct_labels([Path(p) for p in spec.inputs])
    groups = []
    for path, label in zip(spec.inputs, labels):
        rows = read_rows(path, ("feature", "skewness"))
        values = []
        for row in rows:
            value = parse_float(row, "skewness", path=path)
            if value is not None:
                values.append(value)
        if not values:
            warnings.warn(
                f"{path}: no skewness values; group {label!r} omitted", stacklevel=2
            )
            continue
        groups.append((label, values))
    fig, ax = plt.subplots(
        figsize=(1.6 + 1.4 * max(len(groups), 1), 4.2), constrained_layout=True
    )
    for index, (label, values) in enumerate(groups):
        # Deterministic horizontal spread so overlapping points stay visible.
        xs = [index + ((i % 7) - 3) * 0.05 for i in range(len(values))]
        ax.scatter(xs, values, color=group_color(index), alpha=0.85, zorder=3)
        ax.hlines(
            statistics.median(values),
            index - 0.28,
            index + 0.28,
            color=group_color(index),
            linewidth=2.2,
        )
    ax.axhline(0.0, color="#444444", linewidth=0.8, linestyle="--")
    ax.set_xticks(range(len(groups)), [label for label, _v in groups])
    ax.set_ylabel("selected-feature skewness")
    ax.grid(True, axis="y", **GRID_KW)
    if not groups:
        warnings.warn("no plottable rows; figure is empty", stacklevel=2)
    return fig
