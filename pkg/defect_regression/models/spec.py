import logging
from collections.abc import Sequence
from dataclasses import dataclass

from typing_extensions import Self

from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.typing import JsonDict

logger = logging.getLogger(__name__)

INTERCEPT = "intercept"
"""The name of the constant term."""


@dataclass(frozen=True)
class ModelSpec:
    """A linear model: a target column explained by predictor columns.

    Args:
        target:
            The column to predict, ``functional_defects`` or ``all_defects`` for the defect models.

        predictors:
            The explanatory columns, in the order of the coefficients.

        include_intercept:
            Whether the model has a constant term (on by default).
    """

    target: str
    predictors: tuple[str, ...]
    include_intercept: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "predictors", tuple(self.predictors))
        if not self.predictors and not self.include_intercept:
            self._raise("A model without intercept needs at least one predictor.")
        duplicates = sorted({p for p in self.predictors if self.predictors.count(p) > 1})
        if duplicates:
            self._raise(f"Duplicate predictor(s) {', '.join(repr(p) for p in duplicates)}.")
        if self.target in self.predictors:
            self._raise(f"The target {self.target!r} is among the predictors (target among predictors).")
        if INTERCEPT in self.predictors:
            self._raise(f"{INTERCEPT!r} is reserved for the constant term and cannot name a predictor.")

    @staticmethod
    def _raise(msg: str) -> None:
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_MODEL_SPEC)

    @classmethod
    def from_names(cls, target: str, predictors: str | Sequence[str], *, include_intercept: bool = True) -> Self:
        """Create a model from a comma-separated list of predictors (``"kloc,req_error"``) or a sequence."""
        if isinstance(predictors, str):
            predictors = [p.strip() for p in predictors.split(",") if p.strip()]
        return cls(target=target.strip(), predictors=tuple(predictors), include_intercept=include_intercept)

    @property
    def term_names(self) -> tuple[str, ...]:
        """The names of the coefficients, the constant term first when present."""
        return (INTERCEPT, *self.predictors) if self.include_intercept else self.predictors

    @property
    def n_terms(self) -> int:
        return len(self.term_names)

    def to_dict(self) -> JsonDict:
        return {"target": self.target, "predictors": list(self.predictors), "include_intercept": self.include_intercept}

    @classmethod
    def from_dict(cls, data: JsonDict) -> Self:
        return cls(
            target=data["target"],
            predictors=tuple(data["predictors"]),
            include_intercept=bool(data.get("include_intercept", True)),
        )
