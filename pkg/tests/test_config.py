"""Config parsing: strict validation, line-accurate errors, round-trips."""

import textwrap

import pytest

from bermkit.config import (
    COMPARISON_TESTS,
    METHOD_TAGS,
    CaseStudyConfig,
    FitSettings,
    SuiteConfig,
    parse_config,
    parse_config_text,
    serialize_config,
)
from bermkit.errors import SchemaViolation
from bermkit.simulate import Scenario, moderate_scenario

SUITE_MINIMAL = textwrap.dedent(
    """\
    kind: suite
    base_seed: 7
    replicates: 3
    output_dir: out/x
    methods: [berm, lasso]
    scenarios:
      - template: moderate
        sparsity: 0.5
        sigma: 1.0
    """
)

CASE_MINIMAL = textwrap.dedent(
    """\
    kind: case
    data_path: data/cohort.csv
    response_column: age
    output_dir: out/case
    """
)


def fails(text, *, key=None, line=None, contains=None):
    with pytest.raises(SchemaViolation) as err:
        parse_config_text(text)
    if key is not None:
        assert err.value.key == key, (err.value.key, key)
    if line is not None:
        assert err.value.line == line, (err.value.line, line)
    if contains is not None:
        assert contains in str(err.value)
    return err.value


class TestSuiteParsing:
    def test_minimal_suite_with_defaults(self):
        cfg = parse_config_text(SUITE_MINIMAL)
        assert isinstance(cfg, SuiteConfig)
        assert cfg.base_seed == 7
        assert cfg.replicates == 3
        assert cfg.threads == 1
        assert cfg.methods == ("berm", "lasso")
        assert cfg.fit == FitSettings()
        assert cfg.fit.B == 100 and cfg.fit.alpha == 0.5
        (s,) = cfg.scenarios
        assert (s.n, s.p, s.simple) == (300, 60, False)
        assert s.name == "moderate-complex-s0.5-sig1"

    def test_template_simple_and_n_override(self):
        cfg = parse_config_text(
            SUITE_MINIMAL.replace(
                "template: moderate", "template: moderate\n    simple: true"
            ).replace("sigma: 1.0", "sigma: 1.0\n    n: 120")
        )
        (s,) = cfg.scenarios
        assert s.simple and s.n == 120 and s.p == 60
        assert s.cov_spec is None

    def test_custom_scenario_autoname(self):
        cfg = parse_config_text(
            textwrap.dedent(
                """\
                kind: suite
                base_seed: 0
                replicates: 1
                output_dir: o
                methods: [enet]
                scenarios:
                  - {simple: true, n: 80, p: 5, sparsity: 0.4, sigma: 2.0}
                """
            )
        )
        assert cfg.scenarios[0].name == "simple-n80-p5-s0.4-sig2"

    def test_fit_section_parsed(self):
        cfg = parse_config_text(
            SUITE_MINIMAL
            + "fit:\n  B: 25\n  alpha: 0.7\n  reuse_lambda: true\n  fix_beta: true\n"
        )
        assert cfg.fit == FitSettings(B=25, alpha=0.7, reuse_lambda=True, fix_beta=True)

    def test_scenario_order_preserved(self):
        cfg = parse_config_text(
            textwrap.dedent(
                """\
                kind: suite
                base_seed: 0
                replicates: 1
                output_dir: o
                methods: [berm]
                scenarios:
                  - {name: b, simple: true, n: 60, p: 4, sparsity: 0.5, sigma: 1.0}
                  - {name: a, simple: true, n: 60, p: 4, sparsity: 0.5, sigma: 1.0}
                """
            )
        )
        assert tuple(s.name for s in cfg.scenarios) == ("b", "a")


class TestSuiteRejections:
    def test_unknown_top_level_key_with_line(self):
        fails(
            SUITE_MINIMAL + "bogus: 1\n",
            key="bogus",
            line=SUITE_MINIMAL.count("\n") + 1,
            contains="unknown key",
        )

    def test_unknown_fit_key(self):
        fails(SUITE_MINIMAL + "fit:\n  burn_in: 5\n", key="fit.burn_in")

    def test_unknown_scenario_key(self):
        fails(
            SUITE_MINIMAL.replace("sigma: 1.0", "sigma: 1.0\n    rho: 0.5"),
            key="scenarios[0].rho",
            line=10,
        )

    def test_sparsity_out_of_range_points_at_entry_line(self):
        bad = SUITE_MINIMAL.replace("sparsity: 0.5", "sparsity: 1.5")
        fails(bad, key="scenarios[0].sparsity", line=8, contains="[0, 1]")

    def test_sigma_nonpositive(self):
        fails(SUITE_MINIMAL.replace("sigma: 1.0", "sigma: 0.0"), key="scenarios[0].sigma")

    def test_replicates_domain_and_type(self):
        fails(SUITE_MINIMAL.replace("replicates: 3", "replicates: 0"), key="replicates")
        fails(
            SUITE_MINIMAL.replace("replicates: 3", "replicates: two"),
            key="replicates",
            contains="integer",
        )
        fails(
            SUITE_MINIMAL.replace("replicates: 3", "replicates: true"),
            key="replicates",
            contains="integer",
        )

    def test_missing_required_key(self):
        fails(
            SUITE_MINIMAL.replace("base_seed: 7\n", ""),
            contains="missing required key 'base_seed'",
        )

    def test_threads_domain(self):
        fails(SUITE_MINIMAL + "threads: 0\n", key="threads")

    def test_methods_validation(self):
        fails(
            SUITE_MINIMAL.replace("[berm, lasso]", "[berm, ridge]"),
            key="methods[1]",
            contains="unknown method",
        )
        fails(SUITE_MINIMAL.replace("[berm, lasso]", "[berm, berm]"), key="methods")
        fails(SUITE_MINIMAL.replace("[berm, lasso]", "[]"), key="methods")

    def test_scenarios_validation(self):
        fails(
            SUITE_MINIMAL.replace("template: moderate", "template: sideways"),
            key="scenarios[0].template",
        )
        fails(
            SUITE_MINIMAL.replace("sigma: 1.0", "sigma: 1.0\n    p: 10"),
            key="scenarios[0].p",
            contains="template scenarios fix p",
        )
        # custom entries must be simple and carry n and p
        fails(
            SUITE_MINIMAL.replace("template: moderate\n    ", ""),
            key="scenarios[0]",
            contains="simple: true",
        )
        fails(
            textwrap.dedent(
                """\
                kind: suite
                base_seed: 0
                replicates: 1
                output_dir: o
                methods: [berm]
                scenarios:
                  - {simple: true, p: 5, sparsity: 0.4, sigma: 2.0}
                """
            ),
            contains="missing required key 'n'",
        )
        fails(
            SUITE_MINIMAL.replace(
                "scenarios:",
                "scenarios:\n  - template: moderate\n    sparsity: 0.5\n    sigma: 1.0",
            ),
            key="scenarios",
            contains="duplicate scenario name",
        )
        fails(SUITE_MINIMAL.replace(SUITE_MINIMAL.split("scenarios:")[1], " []\n"),
              key="scenarios", contains="nonempty")

    def test_fit_domains(self):
        fails(SUITE_MINIMAL + "fit: {B: 1}\n", key="fit.B")
        fails(SUITE_MINIMAL + "fit: {alpha: 0.0}\n", key="fit.alpha")
        fails(SUITE_MINIMAL + "fit: {alpha: 1.3}\n", key="fit.alpha")
        fails(SUITE_MINIMAL + "fit: {k_folds: 1}\n", key="fit.k_folds")
        fails(SUITE_MINIMAL + "fit: {n_lambda: 1}\n", key="fit.n_lambda")
        fails(SUITE_MINIMAL + "fit: {reuse_lambda: 1}\n", key="fit.reuse_lambda",
              contains="boolean")


class TestCaseParsing:
    def test_minimal_case_with_defaults(self):
        cfg = parse_config_text(CASE_MINIMAL)
        assert isinstance(cfg, CaseStudyConfig)
        assert cfg.group_column is None and cfg.fit_group is None
        assert cfg.eval_groups == ()
        assert cfg.test_fraction == 0.2
        assert cfg.age_threshold is None
        assert cfg.comparison_test == "welch"
        assert cfg.method == "berm"
        assert cfg.seed == 0
        assert cfg.fit == FitSettings()

    def test_full_case(self):
        cfg = parse_config_text(
            CASE_MINIMAL
            + textwrap.dedent(
                """\
                group_column: group
                fit_group: CTR
                eval_groups: [T1D, T2D]
                test_fraction: 0.25
                age_threshold: 41
                comparison_test: mannwhitney
                method: enet
                seed: 9
                fit: {B: 10}
                """
            )
        )
        assert cfg.fit_group == "CTR"
        assert cfg.eval_groups == ("T1D", "T2D")
        assert cfg.age_threshold == 41.0
        assert isinstance(cfg.age_threshold, float)
        assert cfg.comparison_test == "mannwhitney"
        assert cfg.fit.B == 10

    def test_group_consistency(self):
        fails(CASE_MINIMAL + "fit_group: CTR\n", key="fit_group",
              contains="requires group_column")
        fails(CASE_MINIMAL + "eval_groups: [T1D]\n", key="eval_groups",
              contains="requires group_column")
        fails(CASE_MINIMAL + "group_column: group\n",
              contains="group_column requires fit_group")
        fails(
            CASE_MINIMAL + "group_column: g\nfit_group: CTR\neval_groups: [CTR]\n",
            key="eval_groups",
            contains="cannot also be an eval group",
        )

    def test_domains(self):
        fails(CASE_MINIMAL + "test_fraction: 0.0\n", key="test_fraction")
        fails(CASE_MINIMAL + "test_fraction: 1.0\n", key="test_fraction")
        fails(CASE_MINIMAL + "comparison_test: ttest\n", key="comparison_test")
        fails(CASE_MINIMAL + "method: ridge\n", key="method")
        fails(CASE_MINIMAL + "fit: {fix_beta: true}\n", key="fit.fix_beta",
              contains="suite configs")
        fails(CASE_MINIMAL + "eval_groups: [1]\n", key="eval_groups[0]")

    def test_missing_response_column(self):
        fails(
            CASE_MINIMAL.replace("response_column: age\n", ""),
            contains="missing required key 'response_column'",
        )


class TestDocumentShape:
    def test_kind_required_and_checked(self):
        fails("base_seed: 1\n", key="kind", contains="'suite' or 'case'")
        fails("kind: experiment\n", key="kind")

    def test_non_mapping_document(self):
        fails("- 1\n- 2\n", contains="must be a mapping")

    def test_invalid_yaml_reports_line(self):
        err = fails("kind: suite\n  bad_indent: [\n", contains="not valid YAML")
        assert err.line is not None

    def test_empty_document(self):
        fails("", contains="must be a mapping")


class TestRoundTrip:
    def test_suite_round_trip(self):
        cfg = parse_config_text(
            SUITE_MINIMAL
            + "threads: 2\nfit:\n  B: 30\n  tune_alpha: true\n"
        )
        again = parse_config_text(serialize_config(cfg))
        assert again == cfg

    def test_suite_round_trip_custom_simple(self):
        cfg = parse_config_text(
            textwrap.dedent(
                """\
                kind: suite
                base_seed: 5
                replicates: 2
                output_dir: out/z
                methods: [alasso, aenet]
                scenarios:
                  - {simple: true, n: 90, p: 7, sparsity: 0.3, sigma: 1.5}
                """
            )
        )
        assert parse_config_text(serialize_config(cfg)) == cfg

    def test_case_round_trip(self):
        cfg = parse_config_text(
            CASE_MINIMAL
            + "group_column: g\nfit_group: CTR\neval_groups: [T1D]\nage_threshold: 30\n"
        )
        assert parse_config_text(serialize_config(cfg)) == cfg

    def test_custom_covariance_not_serializable(self):
        sc = moderate_scenario(0.5, 1.0)
        custom = Scenario(
            name="odd",
            n=sc.n,
            p=sc.p,
            sparsity=0.5,
            sigma=1.0,
            simple=False,
            cov_spec=sc.cov_spec,
            target_skewness=1234.0,  # not a template target
            target_kurtosis=4321.0,
        )
        cfg = SuiteConfig(
            scenarios=(custom,),
            methods=("berm",),
            replicates=1,
            base_seed=0,
            output_dir="o",
        )
        with pytest.raises(ValueError, match="cannot be serialized"):
            serialize_config(cfg)


class TestFileEntryPoint:
    def test_parse_config_reads_file(self, tmp_path):
        path = tmp_path / "suite.yaml"
        path.write_text(SUITE_MINIMAL, encoding="utf-8")
        cfg = parse_config(path)
        assert isinstance(cfg, SuiteConfig)

    def test_constants_exported(self):
        assert set(METHOD_TAGS) == {"berm", "lasso", "enet", "alasso", "aenet"}
        assert COMPARISON_TESTS == ("welch", "mannwhitney")
