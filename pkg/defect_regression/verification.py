"""
Verification of candidate equations on projects that were not used to fit them.

Each case compares the prediction of a candidate equation for a new project with its prediction interval
and with the actual number of defects. The label of a case is ``<candidate>/<project>``.
"""

import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Final

import pandas as pd

from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.io.csv import parse_number, parse_text, read_csv_text, read_table, write_table
from defect_regression.models import DEFAULT_LEVEL, FittedModel
from defect_regression.typing import StrPath

logger = logging.getLogger(__name__)

CASE_COLUMNS: Final = ("label", "predicted", "actual", "pi_low", "pi_high")
"""The exact header of a verification cases CSV document."""


@dataclass(frozen=True)
class VerificationCase:
    """A prediction made for a new project, with its interval and the defects actually found."""

    label: str
    predicted: float
    actual: float
    pi_low: float
    pi_high: float

    def __post_init__(self) -> None:
        for name in ("predicted", "actual"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                msg = f"Case {self.label!r}: {name} must be a non-negative finite number, got {value!r}."
                logger.error(msg)
                raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_RECORD_VALUE)
        bounds_ok = all(math.isfinite(v) and v >= 0.0 for v in (self.pi_low, self.pi_high))
        if not bounds_ok or self.pi_low > self.pi_high:
            msg = (
                f"Case {self.label!r}: malformed prediction interval ({self.pi_low!r}, {self.pi_high!r}); the "
                f"bounds must be non-negative and ordered."
            )
            logger.error(msg)
            raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.MALFORMED_INTERVAL)

    @property
    def candidate(self) -> str:
        """The candidate equation, the part of the label before the first ``/``."""
        return self.label.split("/", 1)[0]


@dataclass(frozen=True)
class CaseOutcome:
    case: VerificationCase
    predicted_in_pi: bool
    actual_in_pi: bool
    relative_width: float


@dataclass(frozen=True)
class VerificationOutcome:
    """The outcome of the verification of a set of cases."""

    outcomes: tuple[CaseOutcome, ...]

    @property
    def all_predicted_in_pi(self) -> bool:
        return all(o.predicted_in_pi for o in self.outcomes)

    @property
    def all_actual_in_pi(self) -> bool:
        return all(o.actual_in_pi for o in self.outcomes)

    @property
    def n_predicted_in_pi(self) -> int:
        return sum(o.predicted_in_pi for o in self.outcomes)

    @property
    def n_actual_in_pi(self) -> int:
        return sum(o.actual_in_pi for o in self.outcomes)

    @property
    def mean_relative_width(self) -> float:
        """The mean over the cases of ``(pi_high − pi_low) / max(1, predicted)``."""
        return math.fsum(o.relative_width for o in self.outcomes) / len(self.outcomes)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame.from_records(
            [
                {
                    "label": o.case.label,
                    "predicted": o.case.predicted,
                    "actual": o.case.actual,
                    "pi_low": o.case.pi_low,
                    "pi_high": o.case.pi_high,
                    "predicted_in_pi": o.predicted_in_pi,
                    "actual_in_pi": o.actual_in_pi,
                    "relative_width": o.relative_width,
                }
                for o in self.outcomes
            ]
        ).set_index("label")


def _check_not_empty(cases: Sequence[VerificationCase]) -> None:
    if not cases:
        msg = "There is no verification case to verify."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.EMPTY_CASES)


def verify_cases(cases: Sequence[VerificationCase]) -> VerificationOutcome:
    """Check the cases against their prediction intervals (bounds included).

    Args:
        cases:
            At least one case.

    Returns:
        The per-case flags and widths.
    """
    _check_not_empty(cases)
    outcomes = tuple(
        CaseOutcome(
            case=c,
            predicted_in_pi=c.pi_low <= c.predicted <= c.pi_high,
            actual_in_pi=c.pi_low <= c.actual <= c.pi_high,
            relative_width=(c.pi_high - c.pi_low) / max(1.0, c.predicted),
        )
        for c in cases
    )
    return VerificationOutcome(outcomes=outcomes)


def group_cases_by_candidate(cases: Iterable[VerificationCase]) -> dict[str, list[VerificationCase]]:
    """Group the cases by candidate, the candidates in order of first appearance."""
    groups: dict[str, list[VerificationCase]] = {}
    for case in cases:
        groups.setdefault(case.candidate, []).append(case)
    return groups


def rank_candidates(outcomes: Mapping[str, VerificationOutcome]) -> list[str]:
    """Order candidate equations from the most to the least promising.

    The candidates whose predictions all fall in their intervals come first. Within each tier, the narrower
    intervals (in mean relative width) come first; ties keep the declaration order of `outcomes`.
    """
    order = {name: i for i, name in enumerate(outcomes)}

    def key(name: str) -> tuple[bool, float, int]:
        outcome = outcomes[name]
        return not outcome.all_predicted_in_pi, outcome.mean_relative_width, order[name]

    return sorted(outcomes, key=key)


def verify_candidates(cases: Sequence[VerificationCase]) -> tuple[dict[str, VerificationOutcome], list[str]]:
    """Verify the cases of each candidate and rank the candidates."""
    _check_not_empty(cases)
    outcomes = {name: verify_cases(group) for name, group in group_cases_by_candidate(cases).items()}
    return outcomes, rank_candidates(outcomes)


#
# Cases files
#
def parse_cases_csv(text: str, *, source: str = "<string>") -> list[VerificationCase]:
    """Parse a verification cases CSV document with the exact header :data:`CASE_COLUMNS`."""
    frame = read_table(text, CASE_COLUMNS, source=source)
    if frame.empty:
        msg = f"The cases document {source} has no verification case."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.EMPTY_CASES)
    cases = []
    for row, (label, *numbers) in enumerate(frame.itertuples(index=False, name=None), start=1):
        values = [parse_number(v, row=row, column=c) for v, c in zip(numbers, CASE_COLUMNS[1:], strict=True)]
        try:
            cases.append(VerificationCase(parse_text(label, row=row, column="label").strip(), *values))
        except DefectRegressionException as e:
            msg = f"Row {row}: {e.msg}"
            logger.error(msg)
            raise DefectRegressionException(msg=msg, code=e.code) from e
    return cases


def emit_cases_csv(cases: Iterable[VerificationCase]) -> str:
    frame = pd.DataFrame.from_records(
        [(c.label, c.predicted, c.actual, c.pi_low, c.pi_high) for c in cases], columns=list(CASE_COLUMNS)
    )
    return write_table(frame)


def read_cases(path: StrPath) -> list[VerificationCase]:
    text, source = read_csv_text(path)
    return parse_cases_csv(text, source=source)


def write_cases(cases: Iterable[VerificationCase], path: StrPath) -> Path:
    path = Path(path).expanduser().resolve()
    path.write_text(emit_cases_csv(cases), encoding="utf-8", newline="")
    logger.debug(f"Wrote the verification cases to {str(path)!r}.")
    return path


def cases_from_predictions(
    model: FittedModel, frame: pd.DataFrame, candidate: str, level: float = DEFAULT_LEVEL
) -> list[VerificationCase]:
    """Build verification cases by applying a model to new projects whose defects are known.

    Args:
        model:
            The candidate equation.

        frame:
            The predictors of the new projects and their actual target values (the column named like the
            model target), indexed by project.

        candidate:
            The name of the candidate, the first part of the labels.

        level:
            The level of the prediction intervals.

    Returns:
        One case per project. The prediction is rounded to a whole number of defects and the interval is
        clamped at zero then rounded outward.
    """
    target = model.spec.target
    if target not in frame.columns:
        msg = f"Missing the column {target!r} holding the actual number of defects of the new projects."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.MISSING_PREDICTOR)
    predictions = model.predict_frame(frame, level=level)
    cases = []
    for (project_id, actual), row in zip(frame[target].items(), predictions.itertuples(), strict=True):
        cases.append(
            VerificationCase(
                label=f"{candidate}/{project_id}",
                predicted=float(row.point_rounded),
                actual=float(actual),
                pi_low=float(math.floor(row.pi_low)),
                pi_high=float(max(0, math.ceil(row.pi_high))),
            )
        )
    return cases
