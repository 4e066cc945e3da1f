"""
The metric schema of the defect data set and the operations on it.

A :class:`Dataset` is an ordered collection of :class:`MetricRecord`, one per project. The records carry
the metrics collected in the phases preceding system testing and the defects found during system
testing.
"""

import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Final, NamedTuple

import numpy as np
import pandas as pd
from typing_extensions import Self

from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.io.csv import (
    parse_number,
    parse_text,
    parse_whole_number,
    read_csv_text,
    read_table,
    write_table,
)
from defect_regression.typing import FloatArray, Id, StrPath

if TYPE_CHECKING:
    from defect_regression.models.spec import ModelSpec

logger = logging.getLogger(__name__)

COUNT_COLUMNS: Final = (
    "req_error",
    "design_error",
    "coding_error",
    "req_pages",
    "design_pages",
    "total_test_cases",
    "test_case_error",
    "functional_defects",
    "all_defects",
)
REAL_COLUMNS: Final = ("kloc", "total_effort_days", "test_design_effort_days")
COLUMNS: Final = (
    "project_id",
    "req_error",
    "design_error",
    "coding_error",
    "kloc",
    "req_pages",
    "design_pages",
    "total_test_cases",
    "test_case_error",
    "total_effort_days",
    "test_design_effort_days",
    "functional_defects",
    "all_defects",
)
"""The exact header of a data set CSV document."""

METRIC_COLUMNS: Final = COLUMNS[1:]

COLUMN_ALIASES: Final = {
    "req_error": "Requirement Error",
    "design_error": "Design Error",
    "coding_error": "Coding Error",
    "kloc": "KLOC",
    "req_pages": "Requirement Page",
    "design_pages": "Design Page",
    "total_test_cases": "Total Test Cases",
    "test_case_error": "Test Cases Error",
    "total_effort_days": "Total Effort Days",
    "test_design_effort_days": "Total Effort Days in Test Design",
    "functional_defects": "Functional Defects",
    "all_defects": "All Defects",
}
"""The display names of the metric columns."""


#
# Factor catalog
#
class Factor(NamedTuple):
    """A factor that may influence the number of defects found in system testing."""

    area: str
    name: str
    column: str | None = None

    @property
    def measured(self) -> bool:
        """Whether the factor is a column of :class:`MetricRecord`."""
        return self.column is not None


FACTOR_AREAS: Final = (
    "software complexity",
    "knowledge",
    "test process",
    "errors",
    "fault",
    "defect",
    "type of software",
)

FACTOR_CATALOG: Final = (
    Factor("software complexity", "Number of requirement pages", "req_pages"),
    Factor("software complexity", "Number of design pages", "design_pages"),
    Factor("software complexity", "Type of programming language"),
    Factor("software complexity", "Code size", "kloc"),
    Factor("knowledge", "Developer knowledge"),
    Factor("knowledge", "Tester knowledge"),
    Factor("test process", "Test case coverage"),
    Factor("test process", "Total test cases", "total_test_cases"),
    Factor("test process", "Test automation rate"),
    Factor("test process", "Test case execution productivity"),
    Factor("test process", "Total effort in test case design", "test_design_effort_days"),
    Factor("test process", "Total effort in phases prior to system testing", "total_effort_days"),
    Factor("errors", "Requirement error", "req_error"),
    Factor("errors", "Design error", "design_error"),
    Factor("errors", "Code error", "coding_error"),
    Factor("errors", "Test plan error"),
    Factor("errors", "Test cases error", "test_case_error"),
    Factor("fault", "Requirement fault"),
    Factor("fault", "Design fault"),
    Factor("fault", "Code fault"),
    Factor("fault", "Integration fault"),
    Factor("fault", "Test cases fault"),
    Factor("defect", "Severity of defect"),
    Factor("defect", "Type/category of defect"),
    Factor("defect", "Validity of defect"),
    Factor("defect", "Functional defects logged", "functional_defects"),
    Factor("defect", "All defects logged", "all_defects"),
    Factor("type of software", "Component-based"),
    Factor("type of software", "Web-based"),
)
"""The candidate factors, grouped by area. An *error* is a defect found within the phase that introduced
it, a *defect* is found in system testing and a *fault* is the sum of both."""


def catalog_frame() -> pd.DataFrame:
    """The factor catalog as a data frame with the columns ``area``, ``factor``, ``measured`` and ``column``."""
    return pd.DataFrame.from_records(
        [(f.area, f.name, f.measured, f.column) for f in FACTOR_CATALOG],
        columns=["area", "factor", "measured", "column"],
    )


#
# Records
#
@dataclass(frozen=True)
class MetricRecord:
    """The metrics of one project.

    Counts are non-negative integers. Code size is in thousands of lines of code and efforts are in
    person-days; they are non-negative finite numbers.
    """

    project_id: Id
    req_error: int
    design_error: int
    coding_error: int
    kloc: float
    req_pages: int
    design_pages: int
    total_test_cases: int
    test_case_error: int
    total_effort_days: float
    test_design_effort_days: float
    functional_defects: int
    all_defects: int

    def __post_init__(self) -> None:
        if not isinstance(self.project_id, str) or not self.project_id.strip():
            self._raise(f"The project_id must be a non-empty text, got {self.project_id!r}.")
        if self.project_id != self.project_id.strip():
            self._raise(f"The project_id {self.project_id!r} has leading or trailing whitespace.")
        for name in COUNT_COLUMNS:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int | np.integer) or value < 0:
                self._raise(f"{name} must be a non-negative whole number, got {value!r}.")
            object.__setattr__(self, name, int(value))
        for name in REAL_COLUMNS:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int | float | np.number):
                self._raise(f"{name} must be a non-negative finite number, got {value!r}.")
            value = float(value)
            if not (math.isfinite(value) and value >= 0.0):
                self._raise(f"{name} must be a non-negative finite number, got {value!r}.")
            object.__setattr__(self, name, value)
        if self.functional_defects > self.all_defects:
            self._raise(
                f"functional_defects exceeds all_defects ({self.functional_defects} > {self.all_defects}) "
                f"for project {self.project_id!r}."
            )
        if self.test_design_effort_days > self.total_effort_days:
            self._raise(
                f"test_design_effort_days exceeds total_effort_days ({self.test_design_effort_days} > "
                f"{self.total_effort_days}) for project {self.project_id!r}."
            )

    @staticmethod
    def _raise(msg: str) -> None:
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_RECORD_VALUE)

    def to_dict(self) -> dict[str, object]:
        return asdict(self)


#
# Data sets
#
@dataclass(frozen=True)
class Dataset:
    """An ordered collection of project records with unique identifiers.

    Args:
        records:
            The records, in file order (the order matters for the residuals-versus-order diagnostics).

        source:
            Where the records come from, for the messages and the reports.
    """

    records: tuple[MetricRecord, ...]
    source: str = field(default="<memory>", compare=False)

    def __post_init__(self) -> None:
        records = tuple(self.records)
        seen: dict[Id, int] = {}
        for i, record in enumerate(records, start=1):
            if record.project_id in seen:
                msg = (
                    f"Duplicate project_id {record.project_id!r} in {self.source} "
                    f"(records {seen[record.project_id]} and {i})."
                )
                logger.error(msg)
                raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.DUPLICATE_PROJECT_ID)
            seen[record.project_id] = i
        object.__setattr__(self, "records", records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[MetricRecord]:
        return iter(self.records)

    def __repr__(self) -> str:
        return f"<{type(self).__name__}: {len(self)} record(s) from {self.source}>"

    @property
    def project_ids(self) -> list[Id]:
        return [r.project_id for r in self.records]

    def column(self, name: str) -> FloatArray:
        """The values of a metric column as a float array, in record order."""
        check_columns([name])
        return np.array([getattr(r, name) for r in self.records], dtype=np.float64)

    #
    # Conversions
    #
    def to_frame(self) -> pd.DataFrame:
        """The records as a data frame indexed by ``project_id``, with the columns in schema order."""
        frame = pd.DataFrame.from_records([r.to_dict() for r in self.records], columns=list(COLUMNS))
        for name in COUNT_COLUMNS:
            frame[name] = frame[name].astype(np.int64)
        for name in REAL_COLUMNS:
            frame[name] = frame[name].astype(np.float64)
        return frame.set_index("project_id")

    @classmethod
    def from_csv(cls, path: StrPath) -> Self:
        """Read a data set from a CSV file with the exact header :data:`COLUMNS`."""
        text, source = read_csv_text(path)
        return parse_csv(text, source=source)

    def to_csv(self, path: StrPath) -> Path:
        """Write the data set to a CSV file readable by :meth:`from_csv`."""
        path = Path(path).expanduser().resolve()
        path.write_text(emit_csv(self), encoding="utf-8", newline="")
        logger.debug(f"Wrote {len(self)} record(s) to {str(path)!r}.")
        return path


def _located(e: DefectRegressionException, row: int) -> DefectRegressionException:
    msg = f"Row {row}: {e.msg}"
    logger.error(msg)
    return DefectRegressionException(msg=msg, code=e.code)


def check_columns(names: Sequence[str]) -> None:
    """Check that every name is a metric column of the schema."""
    unknown = [n for n in names if n not in METRIC_COLUMNS]
    if unknown:
        msg = (
            f"Unknown column(s) {', '.join(repr(n) for n in unknown)}. Expected metric columns among: "
            f"{', '.join(METRIC_COLUMNS)}."
        )
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.UNKNOWN_COLUMN)


#
# Operations
#
def parse_csv(text: str, *, source: str = "<string>") -> Dataset:
    """Parse a data set CSV document.

    Args:
        text:
            The document. Its header must be exactly :data:`COLUMNS`; every cell must be filled.

        source:
            The name of the document in the error messages.

    Returns:
        The data set, with the records in document order.
    """
    frame = read_table(text, COLUMNS, source=source)
    if frame.empty:
        msg = f"Empty dataset: {source} has a header but no data row."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.EMPTY_DATASET)

    records = []
    for row, cells in enumerate(frame.itertuples(index=False, name=None), start=1):
        values: dict[str, object] = {}
        for column, cell in zip(COLUMNS, cells, strict=True):
            if column == "project_id":
                values[column] = parse_text(cell, row=row, column=column).strip()
            elif column in REAL_COLUMNS:
                values[column] = parse_number(cell, row=row, column=column)
            else:
                values[column] = parse_whole_number(cell, row=row, column=column)
        try:
            records.append(MetricRecord(**values))  # type: ignore[arg-type]
        except DefectRegressionException as e:
            raise _located(e, row) from e

    logger.debug(f"Parsed {len(records)} record(s) from {source}.")
    return Dataset(records=tuple(records), source=source)


def parse_metrics_csv(
    text: str, names: Sequence[str], *, source: str = "<string>", optional: Sequence[str] = ()
) -> pd.DataFrame:
    """Parse a CSV document holding some metric columns of new projects.

    Args:
        text:
            The document. Its header must contain ``project_id`` and `names`, in any order; other columns
            are ignored.

        names:
            The required metric columns.

        source:
            The name of the document in the error messages.

        optional:
            Metric columns read when the document has them.

    Returns:
        A data frame of floats indexed by ``project_id``, in document order.
    """
    check_columns([*names, *optional])
    frame = read_table(text, ["project_id", *names], source=source, exact=False)
    if frame.empty:
        msg = f"Empty dataset: {source} has a header but no data row."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.EMPTY_DATASET)
    columns = list(dict.fromkeys([*names, *(c for c in optional if c in frame.columns)]))
    ids = [parse_text(v, row=i, column="project_id").strip() for i, v in enumerate(frame["project_id"], start=1)]
    index = pd.Index(ids, name="project_id")
    if index.has_duplicates:
        duplicated = sorted(set(index[index.duplicated()]))
        msg = f"Duplicate project_id(s) {', '.join(repr(i) for i in duplicated)} in {source}."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.DUPLICATE_PROJECT_ID)
    data = {c: [parse_number(v, row=i, column=c) for i, v in enumerate(frame[c], start=1)] for c in columns}
    return pd.DataFrame(data, index=index, columns=columns, dtype=np.float64)


def read_metrics(path: StrPath, names: Sequence[str], *, optional: Sequence[str] = ()) -> pd.DataFrame:
    """Read the metric columns of new projects from a CSV file (see :func:`parse_metrics_csv`)."""
    text, source = read_csv_text(path)
    return parse_metrics_csv(text, names, source=source, optional=optional)


def emit_csv(d: Dataset) -> str:
    """Write a data set as a CSV document that :func:`parse_csv` reads back to an equal data set."""
    return write_table(d.to_frame().reset_index())


def _check_not_empty(d: Dataset) -> None:
    if len(d) == 0:
        msg = f"Empty dataset: {d.source} has no record."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.EMPTY_DATASET)


def design_matrix(d: Dataset, spec: "ModelSpec") -> tuple[FloatArray, FloatArray]:
    """Assemble the design matrix and the observations of a model.

    Args:
        d:
            The non-empty data set.

        spec:
            The model. Its target and predictors must be metric columns.

    Returns:
        The ``n × p`` matrix ``X`` (a leading column of ones when the model has an intercept, then the
        predictors in the order of the model) and the ``n`` observations ``y`` of the target.
    """
    check_columns([spec.target, *spec.predictors])
    _check_not_empty(d)
    columns = [d.column(name) for name in spec.predictors]
    if spec.include_intercept:
        columns.insert(0, np.ones(len(d), dtype=np.float64))
    x = np.column_stack(columns) if columns else np.empty((len(d), 0), dtype=np.float64)
    return x, d.column(spec.target)


def summary_stats(d: Dataset) -> pd.DataFrame:
    """The minimum, maximum, mean and sample standard deviation of every metric column.

    The standard deviation uses the ``n − 1`` denominator; it is NaN for a single record.
    """
    _check_not_empty(d)
    rows = []
    for name in METRIC_COLUMNS:
        values = d.column(name)
        mean = math.fsum(values) / len(values)
        if len(values) > 1:
            std = math.sqrt(math.fsum((values - mean) ** 2) / (len(values) - 1))
        else:
            std = math.nan
        rows.append((name, float(values.min()), float(values.max()), mean, std))
    return pd.DataFrame.from_records(rows, columns=["column", "min", "max", "mean", "std"]).set_index("column")
