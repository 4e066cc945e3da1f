"""
This module contains the models of the package: specifications, fitted models, predictions and the
historical size-based baselines.
"""

from defect_regression.models.baselines import LINEAR_LOC, POWER_LOC, BaselineModel, baseline_predict
from defect_regression.models.fitted import DEFAULT_LEVEL, FittedModel, fit, predict
from defect_regression.models.prediction import PredictionResult
from defect_regression.models.spec import INTERCEPT, ModelSpec

__all__ = [
    "DEFAULT_LEVEL",
    "INTERCEPT",
    "LINEAR_LOC",
    "POWER_LOC",
    "BaselineModel",
    "FittedModel",
    "ModelSpec",
    "PredictionResult",
    "baseline_predict",
    "fit",
    "predict",
]
