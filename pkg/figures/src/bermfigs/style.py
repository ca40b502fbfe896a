"""Fixed method colors and ordering shared by every figure.

Methods keep the same color and legend position across all figures so
panels can be compared at a glance.  Unknown method tags still render:
they get a neutral gray and sort after the known ones.
"""

from __future__ import annotations

# Colorblind-safe palette (Tol bright).
METHOD_STYLE: dict[str, str] = {
    "berm": "#4477aa",
    "lasso": "#ee6677",
    "enet": "#228833",
    "alasso": "#ccbb44",
    "aenet": "#aa3377",
}

FALLBACK_COLOR = "#777777"

GROUP_COLORS = ("#4477aa", "#ee6677", "#228833", "#ccbb44", "#aa3377", "#66ccee")

GRID_KW = {"color": "#cccccc", "linewidth": 0.6, "alpha": 0.7}


def method_color(method: str) -> str:
    return METHOD_STYLE.get(method, FALLBACK_COLOR)


def method_order(methods: set[str]) -> list[str]:
    """Known methods in table order, then any others alphabetically."""
    known = [m for m in METHOD_STYLE if m in methods]
    extra = sorted(m for m in methods if m not in METHOD_STYLE)
    return known + extra


def group_color(index: int) -> str:
    return GROUP_COLORS[index % len(GROUP_COLORS)]
