"""
This module contains the exceptions used by Defect Regression.
"""

from enum import Enum, auto, unique

from typing_extensions import Self


@unique
class DefectRegressionExceptionCode(Enum):
    """Error codes used by Defect Regression."""

    # Dataset
    BAD_CSV_HEADER = auto()
    BAD_CSV_VALUE = auto()
    BAD_RECORD_VALUE = auto()
    DUPLICATE_PROJECT_ID = auto()
    EMPTY_DATASET = auto()
    UNKNOWN_COLUMN = auto()

    # Model specification and documents
    BAD_MODEL_SPEC = auto()
    BAD_MODEL_DOCUMENT = auto()
    BAD_SCHEMA_VERSION = auto()
    MISSING_INTERVAL_DATA = auto()
    MISSING_RESIDUALS = auto()

    # Prediction
    MISSING_PREDICTOR = auto()
    BAD_PREDICTOR_VALUE = auto()
    BAD_LEVEL = auto()

    # Gate and verification
    BAD_GATE_CRITERIA = auto()
    NO_PREDICTORS = auto()
    MALFORMED_INTERVAL = auto()
    EMPTY_CASES = auto()

    # Diagnostics and baselines
    BAD_FORMAT = auto()
    BAD_LOC_VALUE = auto()

    # Numerics
    BAD_MATRIX_SHAPE = auto()
    NON_FINITE_VALUE = auto()
    INSUFFICIENT_DEGREES_OF_FREEDOM = auto()
    RANK_DEFICIENT = auto()
    UNDEFINED_R_SQUARED = auto()
    BAD_DOMAIN = auto()
    NO_CONVERGENCE = auto()
    NOT_ENOUGH_OBSERVATIONS = auto()

    @classmethod
    def package_name(cls) -> str:
        return "defect_regression"

    def __str__(self) -> str:
        return f"{self.package_name()}.{self.name}".lower()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, str):
            return other.lower() == str(self)
        return super().__eq__(other)

    def __hash__(self) -> int:
        return hash(self.name)

    @classmethod
    def from_string(cls, string: str | Self) -> Self:
        """A method to convert a string into an error code enumerated type.

        Args:
            string:
                The string depicted the error code. If a good element is given, it is returned directly.

        Returns:
            The enumerated type value corresponding with `string`.
        """
        if isinstance(string, cls):
            return string
        name = string.lower().removeprefix(f"{cls.package_name()}.").upper()
        return cls[name]

    @property
    def is_numerical(self) -> bool:
        """Whether the error comes from the numerical kernel or the fit rather than from the inputs."""
        return self in _NUMERICAL_CODES


_NUMERICAL_CODES = frozenset(
    {
        DefectRegressionExceptionCode.INSUFFICIENT_DEGREES_OF_FREEDOM,
        DefectRegressionExceptionCode.RANK_DEFICIENT,
        DefectRegressionExceptionCode.UNDEFINED_R_SQUARED,
        DefectRegressionExceptionCode.NO_CONVERGENCE,
        DefectRegressionExceptionCode.NOT_ENOUGH_OBSERVATIONS,
        DefectRegressionExceptionCode.BAD_DOMAIN,
    }
)


class DefectRegressionException(Exception):
    """Base exception for Defect Regression."""

    def __init__(self, msg: str, code: DefectRegressionExceptionCode, *args: object) -> None:
        """Constructor of the DefectRegressionException.

        Args:
            msg:
                A text description that provides the reason of the exception and potential
                solution.

            code:
                The code that identifies the reason of the exception.
        """
        super().__init__(msg, code, *args)
        self.msg = msg
        self.code = code

    def __str__(self) -> str:
        return f"[{self.code.name.lower()}] {self.msg}"
