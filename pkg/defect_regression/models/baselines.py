"""
Historical size-based defect predictors, kept for comparison with the fitted models.

The published constants are used verbatim. Their unit of code size is not documented: the functions take
the size in lines of code and never reinterpret it. A :data:`~defect_regression.units.Q_` quantity in
``kloc`` is converted to lines of code first.
"""

import logging
import math
from dataclasses import dataclass
from typing import Final

from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.units import ureg_wraps

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BaselineModel:
    """A predictor of the form ``defects = intercept + slope · LOC ** exponent``."""

    id: str
    intercept: float
    slope: float
    exponent: float
    equation: str


LINEAR_LOC: Final = BaselineModel(
    id="linear_loc", intercept=4.86, slope=0.018, exponent=1.0, equation="Defect = 4.86 + 0.018 LOC"
)
POWER_LOC: Final = BaselineModel(
    id="power_loc", intercept=4.2, slope=0.0015, exponent=4.0 / 3.0, equation="Defect = 4.2 + 0.0015 LOC^(4/3)"
)
BASELINES: Final = {b.id: b for b in (LINEAR_LOC, POWER_LOC)}


@ureg_wraps(None, (None, "loc"))
def baseline_predict(b: BaselineModel, loc: float) -> float:
    """Predict the number of defects from the code size.

    Args:
        b:
            The baseline, :data:`LINEAR_LOC` or :data:`POWER_LOC`.

        loc:
            The code size, a non-negative number of lines of code (or a code size quantity).

    Returns:
        The predicted number of defects.
    """
    if isinstance(loc, bool) or not isinstance(loc, int | float) or not math.isfinite(loc) or loc < 0:
        msg = f"The code size must be a non-negative finite number of lines of code, got {loc!r}."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_LOC_VALUE)
    return b.intercept + b.slope * float(loc) ** b.exponent
