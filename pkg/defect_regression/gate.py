"""
Model acceptance: the gate criteria, the four regression rounds and the check against the published
final equation.
"""

import logging
import math
from dataclasses import dataclass
from decimal import Decimal
from typing import Final, NamedTuple

import pandas as pd
import regex
from typing_extensions import Self

from defect_regression.dataset import Dataset
from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.models import INTERCEPT, FittedModel, ModelSpec, fit

logger = logging.getLogger(__name__)

_CRITERION_PATTERN: Final = regex.compile(r"\s*(?P<key>[a-z_0-9]+)\s*=\s*(?P<value>[^,\s]+)\s*")
_CRITERIA_KEYS: Final = {"p": "p_max", "r2": "r2_min", "adj": "adj_r2_min", "intercept": "gate_intercept"}
_FLAGS: Final = {"on": True, "true": True, "yes": True, "1": True, "off": False, "false": False, "no": False, "0": False}


@dataclass(frozen=True)
class GateCriteria:
    """The thresholds a fitted model must meet to be accepted.

    Args:
        p_max:
            Every gated p-value must be strictly lower than this threshold, in ``(0, 1)``.

        r2_min:
            The coefficient of determination must be strictly greater than this fraction, in ``[0, 1]``.

        adj_r2_min:
            The adjusted coefficient of determination must be strictly greater than this fraction.

        gate_intercept:
            Whether the p-value of the constant term is gated too. By default only the predictors are.
    """

    p_max: float = 0.05
    r2_min: float = 0.85
    adj_r2_min: float = 0.85
    gate_intercept: bool = False

    def __post_init__(self) -> None:
        if not (isinstance(self.p_max, int | float) and 0.0 < self.p_max < 1.0):
            self._raise(f"The p-value threshold must be in (0, 1), got {self.p_max!r}.")
        for name in ("r2_min", "adj_r2_min"):
            value = getattr(self, name)
            if not (isinstance(value, int | float) and 0.0 <= value <= 1.0):
                self._raise(f"The threshold {name} must be in [0, 1], got {value!r}.")

    @staticmethod
    def _raise(msg: str) -> None:
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_GATE_CRITERIA)

    @classmethod
    def parse(cls, text: str) -> Self:
        """Parse criteria from a text such as ``"p=0.05,r2=0.85,adj=0.85"``.

        The keys are ``p``, ``r2``, ``adj`` and ``intercept`` (``on``/``off``); the omitted ones keep their
        default value. The names ``default`` and ``tight`` select the presets :data:`DEFAULT_CRITERIA` and
        :data:`TIGHT_CRITERIA`.
        """
        name = text.strip().lower()
        if name in PRESETS:
            return PRESETS[name]
        values: dict[str, float | bool] = {}
        for item in name.split(","):
            match = _CRITERION_PATTERN.fullmatch(item)
            if match is None or match["key"] not in _CRITERIA_KEYS:
                cls._raise(
                    f"Cannot parse the gate criterion {item.strip()!r} of {text!r}. Expected items like 'p=0.05', "
                    f"'r2=0.85', 'adj=0.85' or 'intercept=on', or one of the presets {', '.join(PRESETS)}."
                )
            field = _CRITERIA_KEYS[match["key"]]
            raw = match["value"]
            if field == "gate_intercept":
                if raw not in _FLAGS:
                    cls._raise(f"The gate criterion 'intercept' expects on or off, got {raw!r}.")
                values[field] = _FLAGS[raw]
            else:
                try:
                    values[field] = float(raw)
                except ValueError:
                    cls._raise(f"The gate criterion {match['key']!r} expects a number, got {raw!r}.")
        return cls(**values)  # type: ignore[arg-type]


DEFAULT_CRITERIA: Final = GateCriteria()
"""p-values below 0.05, R² and adjusted R² above 85 %."""

TIGHT_CRITERIA: Final = GateCriteria(r2_min=0.90, adj_r2_min=0.90)
"""The stricter variant: R² and adjusted R² above 90 %."""

PRESETS: Final = {"default": DEFAULT_CRITERIA, "tight": TIGHT_CRITERIA}


#
# Gate reports
#
class GateItem(NamedTuple):
    """The verdict of one criterion."""

    name: str
    value: float
    threshold: float
    comparison: str
    passed: bool
    gated: bool


@dataclass(frozen=True)
class GateReport:
    """The verdicts of the gate on a fitted model."""

    items: tuple[GateItem, ...]
    criteria: GateCriteria
    degenerate: bool = False

    @property
    def passed(self) -> bool:
        """Whether every gated criterion passes."""
        return all(item.passed for item in self.items if item.gated)

    @property
    def failing(self) -> list[str]:
        """The names of the gated criteria that fail."""
        return [item.name for item in self.items if item.gated and not item.passed]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame.from_records(self.items, columns=GateItem._fields).set_index("name")


def evaluate_gate(m: FittedModel, c: GateCriteria = DEFAULT_CRITERIA) -> GateReport:
    """Check a fitted model against the gate criteria.

    The p-value of every term is compared strictly to ``c.p_max``; the intercept is reported but only gated
    when ``c.gate_intercept`` is on. Both coefficients of determination are compared strictly to their
    thresholds.

    Args:
        m:
            A fitted model with at least one predictor.

        c:
            The criteria.

    Returns:
        The report listing every verdict.
    """
    if not m.spec.predictors:
        msg = f"The model of {m.spec.target!r} has no predictor to gate."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.NO_PREDICTORS)
    items = [
        GateItem(
            name=f"p_value[{term}]",
            value=float(p),
            threshold=c.p_max,
            comparison="<",
            passed=bool(p < c.p_max),
            gated=term != INTERCEPT or c.gate_intercept,
        )
        for term, p in zip(m.term_names, m.p_values, strict=True)
    ]
    items.append(GateItem("r_squared", m.r_squared, c.r2_min, ">", m.r_squared > c.r2_min, True))
    items.append(GateItem("adj_r_squared", m.adj_r_squared, c.adj_r2_min, ">", m.adj_r_squared > c.adj_r2_min, True))
    report = GateReport(items=tuple(items), criteria=c, degenerate=m.degenerate)
    if report.passed:
        logger.info(f"The model of {m.spec.target!r} passes the gate.")
    else:
        logger.info(f"The model of {m.spec.target!r} fails the gate on {', '.join(report.failing)}.")
    return report


#
# Regression rounds
#
FIXED_PREDICTORS: Final = ("req_error", "coding_error", "kloc", "req_pages", "design_pages", "total_test_cases")
"""The predictors shared by every round; the code size is always one of them."""


class RoundConfig(NamedTuple):
    """One of the four regression rounds: a target and an effort predictor."""

    round_id: int
    target: str
    effort_predictor: str

    @property
    def predictors(self) -> tuple[str, ...]:
        return (*FIXED_PREDICTORS, self.effort_predictor)

    @property
    def spec(self) -> ModelSpec:
        return ModelSpec(target=self.target, predictors=self.predictors)


ROUNDS: Final = (
    RoundConfig(1, "functional_defects", "total_effort_days"),
    RoundConfig(2, "all_defects", "total_effort_days"),
    RoundConfig(3, "functional_defects", "test_design_effort_days"),
    RoundConfig(4, "all_defects", "test_design_effort_days"),
)


def enumerate_rounds() -> tuple[ModelSpec, ...]:
    """The model specifications of the four rounds, in round order."""
    return tuple(r.spec for r in ROUNDS)


class RoundResult(NamedTuple):
    config: RoundConfig
    model: FittedModel
    report: GateReport


def run_rounds(d: Dataset, c: GateCriteria = DEFAULT_CRITERIA) -> list[RoundResult]:
    """Fit and gate the four rounds on the same data set, in round order.

    Errors of a fit are raised again with the round they come from.
    """
    results = []
    for config in ROUNDS:
        try:
            model = fit(d, config.spec)
        except DefectRegressionException as e:
            msg = f"Round {config.round_id}: {e.msg}"
            logger.error(msg)
            raise DefectRegressionException(msg=msg, code=e.code) from e
        results.append(RoundResult(config=config, model=model, report=evaluate_gate(model, c)))
    return results


def rounds_frame(results: list[RoundResult]) -> pd.DataFrame:
    """One row per round: the model, its goodness of fit and the gate verdict."""
    records = []
    for config, model, report in results:
        predictor_p = [p for t, p in zip(model.term_names, model.p_values, strict=True) if t != INTERCEPT]
        records.append(
            {
                "round": config.round_id,
                "target": config.target,
                "effort_predictor": config.effort_predictor,
                "r_squared": model.r_squared,
                "adj_r_squared": model.adj_r_squared,
                "max_p_value": max(predictor_p),
                "verdict": "PASS" if report.passed else "FAIL",
                "failing": ";".join(report.failing),
            }
        )
    return pd.DataFrame.from_records(records).set_index("round")


#
# Published equation
#
PUBLISHED_EQUATION: Final = {
    "intercept": "4.00",
    "req_error": "-0.204",
    "coding_error": "-0.631",
    "kloc": "1.90",
    "req_pages": "-0.140",
    "design_pages": "0.125",
    "total_test_cases": "-0.169",
    "total_effort_days": "0.221",
}
"""The printed coefficients of the retained functional-defects model (round 1), as printed."""


def compare_to_published(model: FittedModel) -> pd.DataFrame:
    """Compare the coefficients of a round 1 model to the printed equation.

    The tolerance of a coefficient is one unit of its last printed digit (0.01 for ``4.00``).

    Returns:
        A data frame indexed by term with the columns ``fitted``, ``published``, ``tolerance``,
        ``difference`` and ``within``.
    """
    if list(model.term_names) != list(PUBLISHED_EQUATION):
        msg = (
            f"The model terms {list(model.term_names)} differ from the terms of the published equation "
            f"{list(PUBLISHED_EQUATION)}."
        )
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_MODEL_SPEC)
    records = []
    for term, fitted in model.coefficient_map.items():
        printed = Decimal(PUBLISHED_EQUATION[term])
        tolerance = math.pow(10.0, printed.as_tuple().exponent)  # type: ignore[arg-type]
        difference = fitted - float(printed)
        records.append(
            {
                "term": term,
                "fitted": fitted,
                "published": float(printed),
                "tolerance": tolerance,
                "difference": difference,
                "within": abs(difference) <= tolerance * (1.0 + 1e-9),
            }
        )
    return pd.DataFrame.from_records(records).set_index("term")
