"""Command-line entry point.

Usage::

    berm-figures --kind balanced_accuracy --input out/summary.csv --output ba.svg
    berm-figures --kind simple_vs_complex_diff \
        --input simple/summary.csv complex/summary.csv --output diff.png

Exit codes: 0 on success, 1 when an input file does not match the
expected report schema, 2 on I/O errors (missing or unwritable files).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FIGURE_KINDS, FORMATS, FigureSpec, render
from .schema import SchemaMismatch


def _infer_format(output: str) -> str:
    suffix = Path(output).suffix.lstrip(".").lower()
    return suffix if suffix in FORMATS else "svg"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="berm-figures",
        description="Render figures from bermkit benchmark and case-study CSV reports.",
    )
    parser.add_argument(
        "--kind",
        required=True,
        choices=FIGURE_KINDS,
        help="which figure to render",
    )
    parser.add_argument(
        "--input",
        required=True,
        nargs="+",
        metavar="CSV",
        help="input report CSV(s); simple_vs_complex_diff takes the simple-suite "
        "summary first and the complex-suite summary second",
    )
    parser.add_argument(
        "--output",
        required=True,
        help="output image path (overwritten if present)",
    )
    parser.add_argument(
        "--format",
        choices=FORMATS,
        default=None,
        help="image format; default inferred from the output suffix, else svg",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format if args.format is not None else _infer_format(args.output)
    try:
        spec = FigureSpec(
            kind=args.kind, inputs=tuple(args.input), output=args.output, format=fmt
        )
        out = render(spec)
    except SchemaMismatch as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
