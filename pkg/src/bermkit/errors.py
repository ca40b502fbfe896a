"""Exception and warning types shared across the package.

Every condition a caller is expected to handle gets its own class so that
``except`` clauses never have to match on message text.
"""

from __future__ import annotations


class BermkitError(Exception):
    """Base class for all package-specific errors."""


# ---------------------------------------------------------------------------
# model core


class ConstantColumn(BermkitError):
    """A predictor column has zero variance and cannot be standardized.

    The caller must drop or jitter the offending column; the index is
    carried so harness code can report which one.
    """

    def __init__(self, column: int, message: str | None = None):
        self.column = int(column)
        super().__init__(message or f"column {column} has zero variance")


class DimensionMismatch(BermkitError):
    """Array shapes are inconsistent with the fitted design."""


class ConstantResponse(BermkitError):
    """The response vector is constant, so R-squared is undefined."""


# ---------------------------------------------------------------------------
# solver


class NoConvergence(BermkitError):
    """Coordinate descent exhausted its iteration budget.

    Carries the last iterate and the final maximum coordinate change so
    callers can inspect how close the solve got.
    """

    def __init__(self, max_iter: int, beta_last, max_delta: float):
        self.max_iter = int(max_iter)
        self.beta_last = beta_last
        self.max_delta = float(max_delta)
        super().__init__(
            f"no convergence after {max_iter} sweeps "
            f"(last max coordinate change {max_delta:.3e})"
        )


class AllWeightsInfinite(BermkitError):
    """Every penalty weight is infinite; the lambda grid is undefined."""


class AlphaZero(BermkitError):
    """alpha = 0 leaves lambda_max undefined; supply an explicit grid."""


# ---------------------------------------------------------------------------
# selection


class DegenerateResample(BermkitError):
    """A bootstrap resample kept producing constant columns.

    Raised only after the redraw budget (10 attempts) is exhausted.
    """

    def __init__(self, replicate: int, message: str | None = None):
        self.replicate = int(replicate)
        super().__init__(
            message
            or f"bootstrap replicate {replicate} degenerate after 10 redraws"
        )


class EmptyRelevantSet(UserWarning):
    """No variable survived bootstrap screening; the fit is the zero model."""


# ---------------------------------------------------------------------------
# simulation


class TransformFitFailure(BermkitError):
    """No polynomial transform achieving the moment targets was found."""


# ---------------------------------------------------------------------------
# metrics


class SingularCovariance(BermkitError):
    """Sample covariance is singular; Mahalanobis form is undefined."""


class ZeroVariance(BermkitError):
    """Skewness of a zero-variance sample is undefined."""


class UndefinedClass(BermkitError):
    """Balanced accuracy is undefined because a truth class is empty."""


# ---------------------------------------------------------------------------
# config / CSV ingestion


class SchemaViolation(BermkitError):
    """A config file failed validation.

    ``key`` is a dotted path into the document (e.g. ``scenarios[0].sparsity``)
    and ``line`` is a best-effort 1-based line number in the source file.
    """

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        self.key = key
        self.line = line
        loc = ""
        if key is not None:
            loc += f" at key '{key}'"
        if line is not None:
            loc += f" (line {line})"
        super().__init__(f"{message}{loc}")


class MissingColumn(BermkitError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"required column '{name}' not found in CSV header")


class TooFewRows(BermkitError):
    """The fitting group has too few rows to split and fit."""


class UnparseableCell(BermkitError):
    """A CSV cell could not be parsed as a decimal number.

    ``row`` is the 1-based line number in the file (header = line 1).
    """

    def __init__(self, row: int, col: str):
        self.row = int(row)
        self.col = col
        super().__init__(f"cell at line {row}, column '{col}' is not numeric")
