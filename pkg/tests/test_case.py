"""Case-study runner: CSV ingestion, splitting, prediction, group comparison."""

import csv
import os

import numpy as np
import pytest

from bermkit.case import (
    ACCELERATION_COLUMNS,
    DIAGNOSTIC_COLUMNS,
    PREDICTION_COLUMNS,
    SELECTED_COLUMNS,
    CaseReport,
    read_case_csv,
    run_case_study,
)
from bermkit.config import CaseStudyConfig, FitSettings
from bermkit.errors import MissingColumn, TooFewRows, UnparseableCell

FAST_FIT = FitSettings(B=12, k_folds=4, n_lambda=40)

TRUE_FEATURES = ("f1", "f3", "f5")
TRUE_COEF = {"f1": 2.0, "f3": -1.5, "f5": 0.8}


def write_cohort(path, *, n_ctr=60, n_eval=25, seed=0, noise=0.3):
    """Cohort CSV: response linear in f1, f3, f5; both groups share the law."""
    rng = np.random.default_rng(seed)
    rows = []
    for group, size in (("CTR", n_ctr), ("T1D", n_eval)):
        F = rng.normal(size=(size, 6))
        y = (
            30.0
            + TRUE_COEF["f1"] * F[:, 0]
            + TRUE_COEF["f3"] * F[:, 2]
            + TRUE_COEF["f5"] * F[:, 4]
            + rng.normal(0.0, noise, size)
        )
        for i in range(size):
            rows.append([repr(float(v)) for v in F[i]] + [repr(float(y[i])), group])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["f1", "f2", "f3", "f4", "f5", "f6", "age", "group"])
        w.writerows(rows)
    return path


def case_config(data_path, out, **overrides):
    base = dict(
        data_path=str(data_path),
        response_column="age",
        output_dir=str(out),
        group_column="group",
        fit_group="CTR",
        eval_groups=("T1D",),
        seed=5,
        fit=FAST_FIT,
    )
    base.update(overrides)
    return CaseStudyConfig(**base)


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


@pytest.fixture(scope="module")
def cohort(tmp_path_factory):
    return write_cohort(tmp_path_factory.mktemp("data") / "cohort.csv")


class TestReadCaseCsv:
    def test_happy_path(self, cohort):
        names, X, y, groups, lines = read_case_csv(cohort, "age", "group")
        assert names == ["f1", "f2", "f3", "f4", "f5", "f6"]
        assert X.shape == (85, 6) and y.shape == (85,)
        assert groups[:1] == ["CTR"] and groups[-1] == "T1D"
        assert groups.count("CTR") == 60 and groups.count("T1D") == 25
        assert lines.tolist() == list(range(2, 87))

    def test_blank_lines_skipped_but_line_numbers_faithful(self, tmp_path):
        path = tmp_path / "gap.csv"
        path.write_text("x,age\n1.0,2.0\n\n3.0,4.0\n", encoding="utf-8")
        names, X, y, groups, lines = read_case_csv(path, "age")
        assert names == ["x"]
        assert X[:, 0].tolist() == [1.0, 3.0]
        assert lines.tolist() == [2, 4]

    def test_missing_columns(self, cohort, tmp_path):
        with pytest.raises(MissingColumn) as err:
            read_case_csv(cohort, "height")
        assert err.value.name == "height"
        with pytest.raises(MissingColumn) as err:
            read_case_csv(cohort, "age", "cohort_id")
        assert err.value.name == "cohort_id"

    def test_too_few_rows(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("", encoding="utf-8")
        with pytest.raises(TooFewRows):
            read_case_csv(empty, "age")
        header_only = tmp_path / "h.csv"
        header_only.write_text("x,age\n", encoding="utf-8")
        with pytest.raises(TooFewRows):
            read_case_csv(header_only, "age")

    def test_unparseable_cell_reports_line_and_column(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,age\n1.0,2.0\noops,4.0\n", encoding="utf-8")
        with pytest.raises(UnparseableCell) as err:
            read_case_csv(path, "age")
        assert (err.value.row, err.value.col) == (3, "x")

    def test_unparseable_response(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,age\n1.0,young\n", encoding="utf-8")
        with pytest.raises(UnparseableCell) as err:
            read_case_csv(path, "age")
        assert (err.value.row, err.value.col) == (2, "age")

    def test_short_row_reports_first_missing_column(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("x,z,age\n1.0,2.0,3.0\n4.0\n", encoding="utf-8")
        with pytest.raises(UnparseableCell) as err:
            read_case_csv(path, "age")
        assert (err.value.row, err.value.col) == (3, "z")

    def test_short_row_missing_group(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("x,age,g\n1.0,2.0,CTR\n3.0,4.0\n", encoding="utf-8")
        with pytest.raises(UnparseableCell) as err:
            read_case_csv(path, "age", "g")
        assert (err.value.row, err.value.col) == (3, "g")

    def test_group_column_text_is_unparseable_as_feature(self, cohort):
        with pytest.raises(UnparseableCell) as err:
            read_case_csv(cohort, "age")  # 'group' becomes a predictor
        assert err.value.col == "group"


@pytest.fixture(scope="module")
def run(cohort, tmp_path_factory):
    cfg = case_config(cohort, tmp_path_factory.mktemp("caseout"))
    return cfg, run_case_study(cfg)


class TestRunCaseStudy:
    def test_report_shape(self, run):
        cfg, rep = run
        assert isinstance(rep, CaseReport)
        assert rep.method == "berm"
        assert rep.n_fit == 60
        assert rep.n_test == 12  # round_half_up(0.2 * 60)
        assert rep.n_train == 48
        assert rep.n_fit == rep.n_train + rep.n_test

    def test_recovers_true_support(self, run):
        _, rep = run
        assert rep.selected_features == TRUE_FEATURES
        assert rep.n_selected == 3
        assert rep.r2_test > 0.9

    def test_selected_features_csv(self, run):
        cfg, rep = run
        rows = read_rows(os.path.join(cfg.output_dir, "selected_features.csv"))
        assert tuple(rows[0]) == SELECTED_COLUMNS
        assert [r[0] for r in rows[1:]] == list(rep.selected_features)
        for r in rows[1:]:
            raw = float(r[2])
            assert np.sign(raw) == np.sign(TRUE_COEF[r[0]])
            assert raw == pytest.approx(TRUE_COEF[r[0]], abs=0.5)

    def test_predictions_csv(self, run):
        cfg, rep = run
        rows = read_rows(os.path.join(cfg.output_dir, "predictions.csv"))
        assert tuple(rows[0]) == PREDICTION_COLUMNS
        body = rows[1:]
        splits = [r[2] for r in body]
        assert splits.count("train") == rep.n_train
        assert splits.count("test") == rep.n_test
        assert splits.count("eval") == 25
        for r in body:
            assert float(r[5]) == pytest.approx(float(r[4]) - float(r[3]), abs=1e-12)
            if r[2] == "eval":
                assert r[1] == "T1D"
            else:
                assert r[1] == "CTR"
        # row field is the 1-based source line: unique, within file bounds
        rownums = [int(r[0]) for r in body]
        assert len(set(rownums)) == len(rownums)
        assert all(2 <= v <= 86 for v in rownums)

    def test_acceleration_csv_null_design(self, run):
        cfg, rep = run
        rows = read_rows(os.path.join(cfg.output_dir, "acceleration.csv"))
        assert tuple(rows[0]) == ACCELERATION_COLUMNS
        (row,) = rows[1:]
        assert row[0] == "T1D" and row[1] == "welch"
        assert int(row[2]) == 25 and int(row[3]) == 60  # no age threshold
        assert float(row[6]) == pytest.approx(float(row[4]) - float(row[5]), abs=1e-12)
        assert 0.0 < float(row[8]) <= 1.0
        # the same rows surface on the report
        assert len(rep.acceleration) == 1
        assert rep.acceleration[0][0] == "T1D"

    def test_diagnostics_csv(self, run):
        cfg, rep = run
        rows = read_rows(os.path.join(cfg.output_dir, "diagnostics.csv"))
        assert tuple(rows[0]) == DIAGNOSTIC_COLUMNS
        body = rows[1:]
        assert [r[0] for r in body] == list(rep.selected_features)
        for r in body:
            assert -1.0 <= float(r[3]) <= 1.0  # max |Spearman| among selected
            assert -1.0 <= float(r[4]) <= 1.0
        # signal features correlate with the response in the right direction
        corr = {r[0]: float(r[4]) for r in body}
        assert corr["f1"] > 0.3 and corr["f3"] < -0.3

    def test_deterministic_outputs(self, cohort, tmp_path):
        a = case_config(cohort, tmp_path / "a")
        b = case_config(cohort, tmp_path / "b")
        run_case_study(a)
        run_case_study(b)
        for fname in (
            "selected_features.csv",
            "predictions.csv",
            "acceleration.csv",
            "diagnostics.csv",
        ):
            fa = open(os.path.join(a.output_dir, fname), "rb").read()
            fb = open(os.path.join(b.output_dir, fname), "rb").read()
            assert fa == fb, fname

    def test_seed_changes_split(self, cohort, tmp_path):
        a = run_case_study(case_config(cohort, tmp_path / "a", seed=1))
        b = run_case_study(case_config(cohort, tmp_path / "b", seed=2))
        ra = read_rows(os.path.join(tmp_path / "a", "predictions.csv"))[1:]
        rb = read_rows(os.path.join(tmp_path / "b", "predictions.csv"))[1:]
        split_a = {r[0]: r[2] for r in ra if r[2] != "eval"}
        split_b = {r[0]: r[2] for r in rb if r[2] != "eval"}
        assert split_a != split_b


class TestCaseVariants:
    def test_mannwhitney(self, cohort, tmp_path):
        cfg = case_config(cohort, tmp_path / "o", comparison_test="mannwhitney")
        rep = run_case_study(cfg)
        (row,) = rep.acceleration
        assert row[1] == "mannwhitney"
        assert row[7] >= 0.0  # U statistic
        assert 0.0 < row[8] <= 1.0

    def test_age_threshold_restricts_comparison(self, cohort, tmp_path):
        names, X, y, groups, _ = read_case_csv(cohort, "age", "group")
        groups = np.asarray(groups)
        thr = float(np.median(y))
        cfg = case_config(cohort, tmp_path / "o", age_threshold=thr)
        rep = run_case_study(cfg)
        (row,) = rep.acceleration
        assert row[2] == int(((groups == "T1D") & (y < thr)).sum())
        assert row[3] == int(((groups == "CTR") & (y < thr)).sum())
        assert row[2] < 25 and row[3] < 60

    def test_baseline_method(self, cohort, tmp_path):
        cfg = case_config(cohort, tmp_path / "o", method="enet")
        rep = run_case_study(cfg)
        assert rep.method == "enet"
        assert set(TRUE_FEATURES) <= set(rep.selected_features)
        assert rep.r2_test > 0.9

    def test_no_group_column(self, tmp_path):
        # a cohort with no group column: every row joins the fit
        path = tmp_path / "flat.csv"
        rng = np.random.default_rng(3)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["u", "v", "age"])
            for _ in range(40):
                u, v = rng.normal(size=2)
                w.writerow([repr(float(u)), repr(float(v)), repr(float(10 + 3 * u + rng.normal(0, 0.2)))])
        cfg = CaseStudyConfig(
            data_path=str(path),
            response_column="age",
            output_dir=str(tmp_path / "o"),
            seed=2,
            fit=FAST_FIT,
        )
        rep = run_case_study(cfg)
        assert rep.n_fit == 40
        assert rep.acceleration == ()
        accel = read_rows(os.path.join(cfg.output_dir, "acceleration.csv"))
        assert len(accel) == 1  # header only
        preds = read_rows(os.path.join(cfg.output_dir, "predictions.csv"))[1:]
        assert {r[2] for r in preds} == {"train", "test"}
        assert all(r[1] == "" for r in preds)


class TestCaseGuards:
    def test_fit_group_too_small(self, tmp_path):
        path = write_cohort(tmp_path / "small.csv", n_ctr=15, n_eval=5)
        with pytest.raises(TooFewRows, match="at least 20"):
            run_case_study(case_config(path, tmp_path / "o"))

    def test_train_block_too_small(self, cohort, tmp_path):
        cfg = case_config(cohort, tmp_path / "o", test_fraction=0.9)
        with pytest.raises(TooFewRows, match="train block"):
            run_case_study(cfg)

    def test_empty_eval_group(self, cohort, tmp_path):
        cfg = case_config(cohort, tmp_path / "o", eval_groups=("T2D",))
        with pytest.raises(TooFewRows, match="T2D"):
            run_case_study(cfg)
