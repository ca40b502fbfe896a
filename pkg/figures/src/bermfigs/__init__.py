"""Static figures for bermkit benchmark and case-study CSV reports.

This package is a pure consumer: it reads the CSV files written by the
``bermkit`` command-line tools (``summary.csv`` from benchmark suites,
``diagnostics.csv`` from case studies) and renders them to SVG or PNG.
It never imports ``bermkit`` and works on any files that follow the
published column contracts.
"""

from .render import FIGURE_KINDS, FORMATS, FigureSpec, build_figure, render
from .schema import SchemaMismatch

__all__ = [
    "FIGURE_KINDS",
    "FORMATS",
    "FigureSpec",
    "SchemaMismatch",
    "build_figure",
    "render",
]
