"""CSV column contracts for the bermkit report files.

The benchmark suite writes ``summary.csv`` with one row per
(scenario, method) pair; the case-study runner writes ``diagnostics.csv``
with one row per selected feature.  The column names below mirror the
documented output schema of those tools.  Readers validate the header up
front and raise :class:`SchemaMismatch` naming the offending column, so a
wrong or truncated file fails loudly instead of producing an empty plot.
"""

from __future__ import annotations

import csv
import re
from pathlib import Path

# Scenario names generated by the benchmark harness encode the grid cell,
# e.g. "moderate-complex-s0.5-sig1.5".  The faceted figures recover the
# sparsity (facet) and noise level (x axis) from that suffix.
_SCENARIO_RE = re.compile(r"-s(?P<sparsity>[0-9]+(?:\.[0-9]+)?)-sig(?P<sigma>[0-9]+(?:\.[0-9]+)?)$")


class SchemaMismatch(Exception):
    """An input CSV does not match the expected report schema.

    ``column`` names the first offending column (missing from the header,
    or holding an unparseable value).
    """

    def __init__(self, message: str, *, column: str | None = None):
        super().__init__(message)
        self.column = column


def read_rows(path: str | Path, required: tuple[str, ...]) -> list[dict[str, str]]:
    """Read a CSV file and return its rows as dicts keyed by column name.

    Raises :class:`SchemaMismatch` if any column in ``required`` is absent
    from the header, and :class:`FileNotFoundError` if the file is missing.
    """
    path = Path(path)
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or ()
        missing = [name for name in required if name not in header]
        if missing:
            raise SchemaMismatch(
                f"{path}: missing required column(s): {', '.join(missing)}",
                column=missing[0],
            )
        return list(reader)


def parse_scenario_name(name: str, *, path: str | Path) -> tuple[float, float]:
    """Extract (sparsity, sigma) from a harness scenario name.

    Raises :class:`SchemaMismatch` when the name does not carry the
    ``...-s<sparsity>-sig<sigma>`` suffix the harness generates.
    """
    match = _SCENARIO_RE.search(name)
    if match is None:
        raise SchemaMismatch(
            f"{path}: scenario {name!r} does not encode a grid cell "
            "(expected a name ending in -s<sparsity>-sig<sigma>)",
            column="scenario",
        )
    return float(match.group("sparsity")), float(match.group("sigma"))


def parse_float(row: dict[str, str], column: str, *, path: str | Path) -> float | None:
    """Parse one numeric cell; empty cells mean 'undefined' and map to None."""
    raw = row.get(column, "")
    if raw == "":
        return None
    try:
        return float(raw)
    except ValueError:
        raise SchemaMismatch(
            f"{path}: column {column!r} holds non-numeric value {raw!r}",
            column=column,
        ) from None


def distinct_labels(paths: list[Path]) -> list[str]:
    """Short, mutually distinct labels for a list of input files.

    Uses the fewest trailing path components (extension stripped) that
    tell the inputs apart: ``runs/berm/diagnostics.csv`` next to
    ``runs/enet/diagnostics.csv`` labels as ``berm/diagnostics`` and
    ``enet/diagnostics``.  Fully identical paths fall back to positional
    suffixes.
    """
    parts = [Path(p).with_suffix("").parts for p in paths]
    deepest = max((len(p) for p in parts), default=0)
    for depth in range(1, deepest + 1):
        labels = ["/".join(p[-depth:]) for p in parts]
        if len(set(labels)) == len(labels):
            return labels
    labels = ["/".join(p) for p in parts]
    return [
        f"{label} ({i + 1})" if labels.count(label) > 1 else label
        for i, label in enumerate(labels)
    ]
