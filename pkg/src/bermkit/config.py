"""Config files: parsing, validation, defaults, and serialization.

Configs are YAML mappings with a ``kind`` discriminator (``suite`` or
``case``).  Validation is strict — unknown keys anywhere are a hard
error — and every :class:`~bermkit.errors.SchemaViolation` carries the
dotted key path plus a best-effort 1-based line number in the source.

Suite schema (defaults in parentheses)::

    kind: suite
    base_seed: 7
    replicates: 20
    output_dir: out/suite
    threads: 1                    # (1)
    methods: [berm, lasso, enet, alasso, aenet]
    fit:                          # optional section
      B: 100                      # bootstrap replicates (100)
      alpha: 0.5                  # elastic-net mixing (0.5)
      k_folds: 10                 # CV folds (10)
      n_lambda: 100               # λ-grid size (100)
      reuse_lambda: false         # bootstrap fast mode (false)
      tune_alpha: false           # α-tuning mode (false)
      fix_beta: false             # freeze β per scenario (false)
    scenarios:
      - name: moderate-complex    # optional for template entries
        template: moderate        # moderate | highdim
        sparsity: 0.5
        sigma: 1.0
        simple: false             # template's simple variant (false)
        n: 300                    # optional override (300)
      - name: tiny                # custom entries must be simple
        simple: true
        n: 120
        p: 10
        sparsity: 0.5
        sigma: 2.0

Case schema::

    kind: case
    data_path: data/cohort.csv
    response_column: age
    group_column: group           # optional; enables the group analysis
    fit_group: CTR                # required with group_column
    eval_groups: [T1D]            # ([])
    test_fraction: 0.2            # (0.2), in (0, 1)
    age_threshold: 30             # optional; restricts the comparison
    comparison_test: welch        # welch | mannwhitney (welch)
    method: berm                  # berm | lasso | enet | alasso | aenet
    seed: 0                       # (0)
    output_dir: out/case
    fit: {...}                    # as above, minus fix_beta
"""

from __future__ import annotations

import io
from dataclasses import asdict, dataclass, field

import yaml

from .errors import SchemaViolation
from .simulate import (
    Scenario,
    high_dimensional_covariance,
    high_dimensional_scenario,
    moderate_covariance,
    moderate_scenario,
)

__all__ = [
    "FitSettings",
    "SuiteConfig",
    "CaseStudyConfig",
    "parse_config",
    "parse_config_text",
    "serialize_config",
    "METHOD_TAGS",
    "COMPARISON_TESTS",
]

METHOD_TAGS = ("berm", "lasso", "enet", "alasso", "aenet")
COMPARISON_TESTS = ("welch", "mannwhitney")
_TEMPLATES = ("moderate", "highdim")


@dataclass(frozen=True)
class FitSettings:
    """Estimator settings shared by every fit in a run."""

    B: int = 100
    alpha: float = 0.5
    k_folds: int = 10
    n_lambda: int = 100
    reuse_lambda: bool = False
    tune_alpha: bool = False
    fix_beta: bool = False


@dataclass(frozen=True)
class SuiteConfig:
    """A validated scenario-suite run plan."""

    scenarios: tuple[Scenario, ...]
    methods: tuple[str, ...]
    replicates: int
    base_seed: int
    output_dir: str
    threads: int = 1
    fit: FitSettings = field(default_factory=FitSettings)


@dataclass(frozen=True)
class CaseStudyConfig:
    """A validated case-study run plan for a user-supplied CSV."""

    data_path: str
    response_column: str
    output_dir: str
    group_column: str | None = None
    fit_group: str | None = None
    eval_groups: tuple[str, ...] = ()
    test_fraction: float = 0.2
    age_threshold: float | None = None
    comparison_test: str = "welch"
    method: str = "berm"
    seed: int = 0
    fit: FitSettings = field(default_factory=FitSettings)


# ---------------------------------------------------------------------------
# validation plumbing
# ---------------------------------------------------------------------------


class _Doc:
    """A parsed YAML document plus a dotted-path → line-number map."""

    def __init__(self, text: str):
        try:
            self.value = yaml.safe_load(text)
            node = yaml.compose(io.StringIO(text))
        except yaml.YAMLError as exc:  # malformed YAML
            mark = getattr(exc, "problem_mark", None)
            raise SchemaViolation(
                f"not valid YAML: {exc}",
                line=None if mark is None else mark.line + 1,
            ) from exc
        self.lines: dict[str, int] = {}
        if node is not None:
            self._walk(node, "")

    def _walk(self, node, path):
        self.lines[path] = node.start_mark.line + 1
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                child = f"{path}.{k.value}" if path else str(k.value)
                self.lines[child] = k.start_mark.line + 1
                self._walk(v, child)
        elif isinstance(node, yaml.SequenceNode):
            for i, v in enumerate(node.value):
                self._walk(v, f"{path}[{i}]")

    def fail(self, message, key=None):
        raise SchemaViolation(message, key=key, line=self.lines.get(key or ""))


def _require_mapping(doc, value, key):
    if not isinstance(value, dict):
        doc.fail(f"expected a mapping, got {type(value).__name__}", key)
    return value


def _reject_unknown(doc, mapping, allowed, key_prefix):
    for k in mapping:
        if k not in allowed:
            path = f"{key_prefix}.{k}" if key_prefix else str(k)
            doc.fail(f"unknown key '{k}'", path)


def _get_typed(doc, mapping, key, kinds, key_prefix, default=None, required=False):
    path = f"{key_prefix}.{key}" if key_prefix else key
    if key not in mapping:
        if required:
            doc.fail(f"missing required key '{key}'", key_prefix or key)
        return default
    v = mapping[key]
    if kinds is bool:
        if not isinstance(v, bool):
            doc.fail(f"expected a boolean, got {v!r}", path)
    elif kinds is int:
        if isinstance(v, bool) or not isinstance(v, int):
            doc.fail(f"expected an integer, got {v!r}", path)
    elif kinds is float:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            doc.fail(f"expected a number, got {v!r}", path)
        v = float(v)
    elif kinds is str:
        if not isinstance(v, str):
            doc.fail(f"expected a string, got {v!r}", path)
    elif kinds is list:
        if not isinstance(v, list):
            doc.fail(f"expected a list, got {v!r}", path)
    return v


def _parse_fit(doc, section, key_prefix) -> FitSettings:
    if section is None:
        return FitSettings()
    _require_mapping(doc, section, key_prefix)
    allowed = {
        "B",
        "alpha",
        "k_folds",
        "n_lambda",
        "reuse_lambda",
        "tune_alpha",
        "fix_beta",
    }
    _reject_unknown(doc, section, allowed, key_prefix)
    fs = FitSettings(
        B=_get_typed(doc, section, "B", int, key_prefix, default=100),
        alpha=_get_typed(doc, section, "alpha", float, key_prefix, default=0.5),
        k_folds=_get_typed(doc, section, "k_folds", int, key_prefix, default=10),
        n_lambda=_get_typed(doc, section, "n_lambda", int, key_prefix, default=100),
        reuse_lambda=_get_typed(
            doc, section, "reuse_lambda", bool, key_prefix, default=False
        ),
        tune_alpha=_get_typed(
            doc, section, "tune_alpha", bool, key_prefix, default=False
        ),
        fix_beta=_get_typed(doc, section, "fix_beta", bool, key_prefix, default=False),
    )
    if fs.B < 2:
        doc.fail(f"B must be at least 2, got {fs.B}", f"{key_prefix}.B")
    if not 0.0 < fs.alpha <= 1.0:
        doc.fail(f"alpha must be in (0, 1], got {fs.alpha}", f"{key_prefix}.alpha")
    if fs.k_folds < 2:
        doc.fail(f"k_folds must be at least 2, got {fs.k_folds}", f"{key_prefix}.k_folds")
    if fs.n_lambda < 2:
        doc.fail(
            f"n_lambda must be at least 2, got {fs.n_lambda}", f"{key_prefix}.n_lambda"
        )
    return fs


def _parse_scenario(doc, entry, path) -> Scenario:
    _require_mapping(doc, entry, path)
    allowed = {"name", "template", "simple", "sparsity", "sigma", "n", "p"}
    _reject_unknown(doc, entry, allowed, path)
    template = _get_typed(doc, entry, "template", str, path)
    simple = _get_typed(doc, entry, "simple", bool, path, default=False)
    sparsity = _get_typed(doc, entry, "sparsity", float, path, required=True)
    sigma = _get_typed(doc, entry, "sigma", float, path, required=True)
    name = _get_typed(doc, entry, "name", str, path)
    if not 0.0 <= sparsity <= 1.0:
        doc.fail(f"sparsity must be in [0, 1], got {sparsity}", f"{path}.sparsity")
    if not sigma > 0:
        doc.fail(f"sigma must be positive, got {sigma}", f"{path}.sigma")
    try:
        if template is not None:
            if template not in _TEMPLATES:
                doc.fail(
                    f"unknown template '{template}'; expected one of {list(_TEMPLATES)}",
                    f"{path}.template",
                )
            if "p" in entry:
                doc.fail("template scenarios fix p; remove it", f"{path}.p")
            n = _get_typed(doc, entry, "n", int, path, default=300)
            factory = (
                moderate_scenario if template == "moderate" else high_dimensional_scenario
            )
            return factory(sparsity, sigma, simple=simple, n=n, name=name)
        if not simple:
            doc.fail(
                "custom scenarios must set simple: true "
                "(complex covariances come from templates)",
                path,
            )
        n = _get_typed(doc, entry, "n", int, path, required=True)
        p = _get_typed(doc, entry, "p", int, path, required=True)
        if name is None:
            name = f"simple-n{n}-p{p}-s{sparsity:g}-sig{sigma:g}"
        return Scenario(
            name=name, n=n, p=p, sparsity=sparsity, sigma=sigma, simple=True
        )
    except ValueError as exc:  # Scenario's own validation
        doc.fail(str(exc), path)


def _parse_suite(doc, top) -> SuiteConfig:
    allowed = {
        "kind",
        "scenarios",
        "methods",
        "replicates",
        "base_seed",
        "output_dir",
        "threads",
        "fit",
    }
    _reject_unknown(doc, top, allowed, "")
    methods = _get_typed(doc, top, "methods", list, "", required=True)
    for i, m in enumerate(methods):
        if m not in METHOD_TAGS:
            doc.fail(
                f"unknown method '{m}'; expected one of {list(METHOD_TAGS)}",
                f"methods[{i}]",
            )
    if len(set(methods)) != len(methods):
        doc.fail("methods must be unique", "methods")
    if not methods:
        doc.fail("methods must be nonempty", "methods")
    replicates = _get_typed(doc, top, "replicates", int, "", required=True)
    if replicates < 1:
        doc.fail(f"replicates must be at least 1, got {replicates}", "replicates")
    base_seed = _get_typed(doc, top, "base_seed", int, "", required=True)
    output_dir = _get_typed(doc, top, "output_dir", str, "", required=True)
    threads = _get_typed(doc, top, "threads", int, "", default=1)
    if threads < 1:
        doc.fail(f"threads must be at least 1, got {threads}", "threads")
    entries = _get_typed(doc, top, "scenarios", list, "", required=True)
    if not entries:
        doc.fail("scenarios must be nonempty", "scenarios")
    scenarios = tuple(
        _parse_scenario(doc, e, f"scenarios[{i}]") for i, e in enumerate(entries)
    )
    names = [s.name for s in scenarios]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        doc.fail(f"duplicate scenario name '{dup}'", "scenarios")
    return SuiteConfig(
        scenarios=scenarios,
        methods=tuple(methods),
        replicates=replicates,
        base_seed=base_seed,
        output_dir=output_dir,
        threads=threads,
        fit=_parse_fit(doc, top.get("fit"), "fit"),
    )


def _parse_case(doc, top) -> CaseStudyConfig:
    allowed = {
        "kind",
        "data_path",
        "response_column",
        "group_column",
        "fit_group",
        "eval_groups",
        "test_fraction",
        "age_threshold",
        "comparison_test",
        "method",
        "seed",
        "output_dir",
        "fit",
    }
    _reject_unknown(doc, top, allowed, "")
    data_path = _get_typed(doc, top, "data_path", str, "", required=True)
    response_column = _get_typed(doc, top, "response_column", str, "", required=True)
    output_dir = _get_typed(doc, top, "output_dir", str, "", required=True)
    group_column = _get_typed(doc, top, "group_column", str, "")
    fit_group = _get_typed(doc, top, "fit_group", str, "")
    eval_groups = _get_typed(doc, top, "eval_groups", list, "", default=[])
    for i, g in enumerate(eval_groups):
        if not isinstance(g, str):
            doc.fail(f"expected a string, got {g!r}", f"eval_groups[{i}]")
    test_fraction = _get_typed(doc, top, "test_fraction", float, "", default=0.2)
    if not 0.0 < test_fraction < 1.0:
        doc.fail(
            f"test_fraction must be in (0, 1), got {test_fraction}", "test_fraction"
        )
    age_threshold = _get_typed(doc, top, "age_threshold", float, "")
    comparison_test = _get_typed(
        doc, top, "comparison_test", str, "", default="welch"
    )
    if comparison_test not in COMPARISON_TESTS:
        doc.fail(
            f"unknown comparison_test '{comparison_test}'; "
            f"expected one of {list(COMPARISON_TESTS)}",
            "comparison_test",
        )
    method = _get_typed(doc, top, "method", str, "", default="berm")
    if method not in METHOD_TAGS:
        doc.fail(
            f"unknown method '{method}'; expected one of {list(METHOD_TAGS)}", "method"
        )
    seed = _get_typed(doc, top, "seed", int, "", default=0)
    if group_column is None:
        if fit_group is not None:
            doc.fail("fit_group requires group_column", "fit_group")
        if eval_groups:
            doc.fail("eval_groups requires group_column", "eval_groups")
    elif fit_group is None:
        doc.fail("group_column requires fit_group", "")
    if fit_group is not None and fit_group in eval_groups:
        doc.fail("fit_group cannot also be an eval group", "eval_groups")
    fit = _parse_fit(doc, top.get("fit"), "fit")
    if fit.fix_beta:
        doc.fail("fix_beta applies only to suite configs", "fit.fix_beta")
    return CaseStudyConfig(
        data_path=data_path,
        response_column=response_column,
        output_dir=output_dir,
        group_column=group_column,
        fit_group=fit_group,
        eval_groups=tuple(eval_groups),
        test_fraction=test_fraction,
        age_threshold=age_threshold,
        comparison_test=comparison_test,
        method=method,
        seed=seed,
        fit=fit,
    )


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------


def parse_config_text(text: str) -> SuiteConfig | CaseStudyConfig:
    """Parse and validate a config document from a string."""
    doc = _Doc(text)
    top = doc.value
    if not isinstance(top, dict):
        doc.fail(f"config must be a mapping, got {type(top).__name__}")
    kind = top.get("kind")
    if kind not in ("suite", "case"):
        doc.fail(f"kind must be 'suite' or 'case', got {kind!r}", "kind")
    if kind == "suite":
        return _parse_suite(doc, top)
    return _parse_case(doc, top)


def parse_config(path) -> SuiteConfig | CaseStudyConfig:
    """Parse and validate the config file at ``path``."""
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def _scenario_to_entry(s: Scenario) -> dict:
    """Invert scenario construction back to its config entry."""
    base = {"name": s.name, "sparsity": s.sparsity, "sigma": s.sigma, "n": s.n}
    if s.simple:
        return {**base, "simple": True, "p": s.p}
    targets = (s.target_skewness, s.target_kurtosis)
    if s.cov_spec == moderate_covariance() and s.p == 60 and targets == (5000.0, 25000.0):
        return {**base, "template": "moderate"}
    if (
        s.cov_spec == high_dimensional_covariance()
        and s.p == 500
        and targets == (10000.0, 300000.0)
    ):
        return {**base, "template": "highdim"}
    raise ValueError(
        f"scenario '{s.name}' has a custom covariance and cannot be serialized"
    )


def serialize_config(cfg: SuiteConfig | CaseStudyConfig) -> str:
    """Render a config back to canonical YAML (inverse of parsing)."""
    fit = asdict(cfg.fit)
    if isinstance(cfg, SuiteConfig):
        out = {
            "kind": "suite",
            "base_seed": cfg.base_seed,
            "replicates": cfg.replicates,
            "output_dir": cfg.output_dir,
            "threads": cfg.threads,
            "methods": list(cfg.methods),
            "fit": fit,
            "scenarios": [_scenario_to_entry(s) for s in cfg.scenarios],
        }
    else:
        out = {
            "kind": "case",
            "data_path": cfg.data_path,
            "response_column": cfg.response_column,
            "output_dir": cfg.output_dir,
            "test_fraction": cfg.test_fraction,
            "comparison_test": cfg.comparison_test,
            "method": cfg.method,
            "seed": cfg.seed,
            "fit": {k: v for k, v in fit.items() if k != "fix_beta"},
        }
        if cfg.group_column is not None:
            out["group_column"] = cfg.group_column
            out["fit_group"] = cfg.fit_group
            out["eval_groups"] = list(cfg.eval_groups)
        if cfg.age_threshold is not None:
            out["age_threshold"] = cfg.age_threshold
    return yaml.safe_dump(out, sort_keys=False)
