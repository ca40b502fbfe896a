"""Session fixtures that produce real bermkit report CSVs.

The figure package consumes the benchmark/case-study tools only through
their CSV outputs, so these fixtures exercise that boundary for real:
they drive the installed ``bermkit`` command line in a subprocess (never
importing it) and hand the resulting files to the rendering tests.
"""

from __future__ import annotations

import csv
import math
import random
import subprocess
import sys
from pathlib import Path

import matplotlib.pyplot as plt
import pytest

_FIT_SECTION = "fit: {B: 10, k_folds: 5, n_lambda: 40}\n"


@pytest.fixture(autouse=True)
def _close_figures():
    yield
    plt.close("all")


def _run(args, cwd):
    proc = subprocess.run(
        [sys.executable, "-m", "bermkit", *args],
        cwd=cwd,
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, (
        f"bermkit {' '.join(args)} failed ({proc.returncode}):\n"
        f"{proc.stdout}\n{proc.stderr}"
    )


def _suite_yaml(scenarios: str, out_dir: Path) -> str:
    return (
        "kind: suite\n"
        "base_seed: 7\n"
        "replicates: 2\n"
        "threads: 1\n"
        "methods: [berm, lasso]\n"
        f"output_dir: {out_dir}\n"
        f"scenarios:\n{scenarios}"
        f"{_FIT_SECTION}"
    )


def _write_cohort(path: Path, *, n_fit=100, n_null=40, seed=3) -> None:
    """A small synthetic cohort CSV with six strongly informative features."""
    rng = random.Random(seed)
    features = [f"m{i:02d}" for i in range(1, 13)]
    coef = {"m01": 1.8, "m02": -1.4, "m03": 1.1, "m04": 0.9, "m05": -0.8, "m06": 0.7}
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(features + ["age", "group"])
        for i in range(n_fit + n_null):
            x = {name: rng.gauss(0.0, 1.0) for name in features}
            # one right-skewed feature so the skewness figure has texture
            x["m07"] = (math.exp(0.75 * rng.gauss(0.0, 1.0)) - 1.325) / 1.15
            y = 20.0 + sum(c * x[name] for name, c in coef.items())
            y += rng.gauss(0.0, 0.3)
            group = "control" if i < n_fit else "condition"
            writer.writerow([repr(x[name]) for name in features] + [repr(y), group])


@pytest.fixture(scope="session")
def real_reports(tmp_path_factory):
    """Real summary/diagnostics CSVs from small benchmark and case runs."""
    base = tmp_path_factory.mktemp("reports")

    simple_scenarios = "".join(
        f"  - {{simple: true, n: 150, p: 12, sparsity: 0.5, sigma: {sigma}}}\n"
        for sigma in (1.0, 2.0, 3.0)
    )
    complex_scenarios = "".join(
        f"  - {{template: moderate, n: 150, sparsity: 0.5, sigma: {sigma}}}\n"
        for sigma in (1.0, 2.0, 3.0)
    )
    simple_cfg = base / "suite_simple.yaml"
    simple_cfg.write_text(_suite_yaml(simple_scenarios, base / "simple"))
    complex_cfg = base / "suite_complex.yaml"
    complex_cfg.write_text(_suite_yaml(complex_scenarios, base / "complex"))
    _run(["suite", "run", str(simple_cfg), "--out", str(base / "simple")], cwd=base)
    _run(["suite", "run", str(complex_cfg), "--out", str(base / "complex")], cwd=base)

    cohort = base / "cohort.csv"
    _write_cohort(cohort)
    diagnostics = {}
    for method in ("berm", "enet"):
        out_dir = base / f"case-{method}"
        cfg = base / f"case_{method}.yaml"
        cfg.write_text(
            "kind: case\n"
            f"data_path: {cohort}\n"
            "response_column: age\n"
            "group_column: group\n"
            "fit_group: control\n"
            "eval_groups: [condition]\n"
            f"method: {method}\n"
            "seed: 3\n"
            f"output_dir: {out_dir}\n"
            f"{_FIT_SECTION}"
        )
        _run(["case", "run", str(cfg), "--out", str(out_dir)], cwd=base)
        diagnostics[method] = out_dir / "diagnostics.csv"

    return {
        "simple_summary": base / "simple" / "summary.csv",
        "complex_summary": base / "complex" / "summary.csv",
        "diagnostics_berm": diagnostics["berm"],
        "diagnostics_enet": diagnostics["enet"],
    }
