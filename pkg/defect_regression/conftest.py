from collections.abc import Callable, Mapping, Sequence
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple

import numpy as np
import pytest

from defect_regression.dataset import COUNT_COLUMNS, REAL_COLUMNS, Dataset, MetricRecord
from defect_regression.gate import enumerate_rounds
from defect_regression.models import FittedModel, ModelSpec, fit
from defect_regression.utils.log import set_logging_config

HERE = Path(__file__).parent.expanduser().absolute()
DATA_FOLDER = HERE.parent / "data"


class ExactSolution(NamedTuple):
    beta: np.ndarray
    xtx_inv: np.ndarray
    sse: float


def _exact_normal_equations(x: np.ndarray, y: np.ndarray) -> ExactSolution:
    """Solve the normal equations with rational arithmetic (the floats are converted exactly)."""
    xf = [[Fraction(float(v)) for v in row] for row in np.asarray(x, dtype=np.float64)]
    yf = [Fraction(float(v)) for v in np.asarray(y, dtype=np.float64)]
    n, p = len(xf), len(xf[0])
    xtx = [[sum((xf[k][i] * xf[k][j] for k in range(n)), Fraction(0)) for j in range(p)] for i in range(p)]
    xty = [sum((xf[k][i] * yf[k] for k in range(n)), Fraction(0)) for i in range(p)]

    # Gauss-Jordan on [XᵀX | I | Xᵀy]
    aug = [xtx[i] + [Fraction(int(i == j)) for j in range(p)] + [xty[i]] for i in range(p)]
    for col in range(p):
        pivot = next(r for r in range(col, p) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pivot_value = aug[col][col]
        aug[col] = [v / pivot_value for v in aug[col]]
        for r in range(p):
            factor = aug[r][col]
            if r != col and factor != 0:
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col], strict=True)]

    beta = [row[2 * p] for row in aug]
    residuals = [yf[k] - sum((xf[k][j] * beta[j] for j in range(p)), Fraction(0)) for k in range(n)]
    return ExactSolution(
        beta=np.array([float(b) for b in beta]),
        xtx_inv=np.array([[float(v) for v in row[p : 2 * p]] for row in aug]),
        sse=float(sum((r * r for r in residuals), Fraction(0))),
    )


@pytest.fixture(autouse=True, scope="session")
def _log_setup():
    """A basic fixture (automatically used) to set the log level"""
    set_logging_config(verbosity="debug")


@pytest.fixture(scope="session")
def data_folder() -> Path:
    return DATA_FOLDER


@pytest.fixture(scope="session")
def table2_path() -> Path:
    return DATA_FOLDER / "table2.csv"


@pytest.fixture(scope="session")
def table3_path() -> Path:
    return DATA_FOLDER / "table3.csv"


@pytest.fixture(scope="session")
def table2(table2_path) -> Dataset:
    return Dataset.from_csv(table2_path)


@pytest.fixture(scope="session")
def round1_spec() -> ModelSpec:
    return enumerate_rounds()[0]


@pytest.fixture(scope="session")
def round1_model(table2, round1_spec) -> FittedModel:
    return fit(table2, round1_spec)


@pytest.fixture(scope="session")
def exact_least_squares() -> Callable[[np.ndarray, np.ndarray], ExactSolution]:
    """The normal equations solved exactly, an oracle for the QR path."""
    return _exact_normal_equations


def _make_dataset(columns: Mapping[str, Sequence[float]], source: str = "<test>") -> Dataset:
    """A data set holding the given columns; the other counts are 0 and the other reals 0.0.

    When omitted, ``all_defects`` and ``total_effort_days`` are raised to keep the records consistent.
    """
    n = len(next(iter(columns.values())))
    records = []
    for i in range(n):
        values: dict[str, object] = {name: 0 for name in COUNT_COLUMNS}
        values.update({name: 0.0 for name in REAL_COLUMNS})
        values.update({name: column[i] for name, column in columns.items()})
        if "all_defects" not in columns:
            values["all_defects"] = values["functional_defects"]
        if "total_effort_days" not in columns:
            values["total_effort_days"] = values["test_design_effort_days"]
        records.append(MetricRecord(project_id=f"P{i + 1}", **values))  # type: ignore[arg-type]
    return Dataset(records=tuple(records), source=source)


@pytest.fixture(scope="session")
def make_dataset() -> Callable[..., Dataset]:
    """Build small data sets from a few columns."""
    return _make_dataset
