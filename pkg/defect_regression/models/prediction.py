import math
from dataclasses import dataclass

from defect_regression.typing import Id, JsonDict


@dataclass(frozen=True)
class PredictionResult:
    """The prediction of a fitted model for one new project.

    The bounds are the raw interval bounds: a prediction interval of a small defect count usually has a
    negative lower bound. Use :attr:`displayed_pi_low` (clamped at zero) for reports.

    Args:
        point:
            The predicted number of defects ``x0ᵀβ``, possibly negative.

        pi_low, pi_high:
            The bounds of the prediction interval of a single new observation.

        ci_low, ci_high:
            The bounds of the confidence interval of the mean response.

        level:
            The confidence level of both intervals.

        leverage_term:
            The term ``x0ᵀ(XᵀX)⁻¹x0`` that widens the intervals away from the training data.

        project_id:
            The project the prediction is made for, if known.
    """

    point: float
    pi_low: float
    pi_high: float
    ci_low: float
    ci_high: float
    level: float
    leverage_term: float
    project_id: Id | None = None

    @property
    def point_rounded(self) -> int:
        """The point prediction rounded half up to the nearest non-negative whole number of defects.

        Halves always go up (2.5 gives 3), as defect counts are reported, whereas the built-in :func:`round`
        rounds them to the even neighbour (2.5 gives 2). Negative predictions give zero defects.
        """
        return max(0, math.floor(self.point + 0.5))

    @property
    def displayed_pi_low(self) -> float:
        """The lower bound of the prediction interval, clamped at zero defects."""
        return max(0.0, self.pi_low)

    @property
    def displayed_ci_low(self) -> float:
        return max(0.0, self.ci_low)

    @property
    def pi_width(self) -> float:
        return self.pi_high - self.pi_low

    def to_dict(self) -> JsonDict:
        return {
            "project_id": self.project_id,
            "point": self.point,
            "point_rounded": self.point_rounded,
            "pi_low": self.displayed_pi_low,
            "pi_high": self.pi_high,
            "ci_low": self.displayed_ci_low,
            "ci_high": self.ci_high,
            "level": self.level,
            "leverage_term": self.leverage_term,
        }
