"""Command-line interface.

Subcommands::

    bermkit suite run CONFIG [--threads N] [--out DIR] [--seed S] [--replicates N]
    bermkit case run CONFIG [--out DIR] [--seed S]
    bermkit validate CONFIG

Exit codes: 0 success, 1 config/schema/data error, 2 IO error,
3 every suite cell failed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .case import run_case_study
from .config import CaseStudyConfig, SuiteConfig, parse_config
from .errors import BermkitError, SchemaViolation
from .harness import run_suite

__all__ = ["main"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_ALL_FAILED = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bermkit",
        description="Penalized regression benchmarking: scenario suites and CSV case studies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    suite = sub.add_parser("suite", help="scenario-suite operations")
    suite_sub = suite.add_subparsers(dest="action", required=True)
    suite_run = suite_sub.add_parser("run", help="run a scenario suite")
    suite_run.add_argument("config", help="suite config file")
    suite_run.add_argument("--threads", type=int, help="worker threads (overrides config)")
    suite_run.add_argument("--out", help="output directory (overrides config)")
    suite_run.add_argument("--seed", type=int, help="base seed (overrides config)")
    suite_run.add_argument(
        "--replicates", type=int, help="replicate count (overrides config)"
    )

    case = sub.add_parser("case", help="case-study operations")
    case_sub = case.add_subparsers(dest="action", required=True)
    case_run = case_sub.add_parser("run", help="run a CSV case study")
    case_run.add_argument("config", help="case-study config file")
    case_run.add_argument("--out", help="output directory (overrides config)")
    case_run.add_argument("--seed", type=int, help="seed (overrides config)")

    validate = sub.add_parser("validate", help="validate a config file")
    validate.add_argument("config", help="config file to check")
    return parser


def _fail(exc: BermkitError) -> int:
    if isinstance(exc, SchemaViolation):
        where = ""
        if exc.key:
            where += f" at {exc.key}"
        if exc.line is not None:
            where += f" (line {exc.line})"
        print(f"config error{where}: {exc}", file=sys.stderr)
    else:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_CONFIG


def _cmd_suite_run(args) -> int:
    cfg = parse_config(args.config)
    if not isinstance(cfg, SuiteConfig):
        raise SchemaViolation("expected a suite config (kind: suite)", key="kind")
    if args.threads is not None:
        cfg = replace(cfg, threads=args.threads)
    if args.out is not None:
        cfg = replace(cfg, output_dir=args.out)
    if args.seed is not None:
        cfg = replace(cfg, base_seed=args.seed)
    if args.replicates is not None:
        cfg = replace(cfg, replicates=args.replicates)
    report = run_suite(cfg)
    print(
        f"suite: {report.n_ok}/{report.n_cells} cells ok, "
        f"{report.n_failed} failed -> {report.output_dir}"
    )
    if report.n_cells > 0 and report.n_ok == 0:
        return EXIT_ALL_FAILED
    return EXIT_OK


def _cmd_case_run(args) -> int:
    cfg = parse_config(args.config)
    if not isinstance(cfg, CaseStudyConfig):
        raise SchemaViolation("expected a case-study config (kind: case)", key="kind")
    if args.out is not None:
        cfg = replace(cfg, output_dir=args.out)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    report = run_case_study(cfg)
    print(
        f"case: method={report.method} n_fit={report.n_fit} "
        f"(train {report.n_train} / test {report.n_test}) "
        f"test_r2={report.r2_test:.4f} selected={report.n_selected} "
        f"-> {report.output_dir}"
    )
    for row in report.acceleration:
        group, test, n_g, n_ref, _, _, diff, _, p = row
        diff_s = "n/a" if diff is None else f"{diff:+.3f}"
        p_s = "n/a" if p is None else f"{p:.4g}"
        print(
            f"  acceleration[{group}]: diff={diff_s} p={p_s} "
            f"({test}, n={n_g} vs {n_ref})"
        )
    return EXIT_OK


def _cmd_validate(args) -> int:
    cfg = parse_config(args.config)
    if isinstance(cfg, SuiteConfig):
        print(
            f"ok: suite config with {len(cfg.scenarios)} scenario(s), "
            f"{len(cfg.methods)} method(s), {cfg.replicates} replicate(s)"
        )
    else:
        print(f"ok: case config for {cfg.data_path} (method {cfg.method})")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "suite":
            return _cmd_suite_run(args)
        if args.command == "case":
            return _cmd_case_run(args)
        return _cmd_validate(args)
    except BermkitError as exc:
        return _fail(exc)
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
