"""
Regression models predicting the defects found during system testing from the metrics of the earlier
phases of a software project.
"""

import importlib.metadata

from defect_regression.dataset import Dataset, MetricRecord, design_matrix, parse_csv, summary_stats
from defect_regression.diagnostics import ResidualDiagnostics, compute_diagnostics, render_plots, write_plots
from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.gate import (
    DEFAULT_CRITERIA,
    TIGHT_CRITERIA,
    GateCriteria,
    GateReport,
    compare_to_published,
    enumerate_rounds,
    evaluate_gate,
    run_rounds,
)
from defect_regression.models import (
    LINEAR_LOC,
    POWER_LOC,
    BaselineModel,
    FittedModel,
    ModelSpec,
    PredictionResult,
    baseline_predict,
    fit,
    predict,
)
from defect_regression.units import Q_, ureg
from defect_regression.verification import VerificationCase, VerificationOutcome, rank_candidates, verify_cases

try:
    __version__ = importlib.metadata.version("defect-regression")
except importlib.metadata.PackageNotFoundError:  # pragma: no-cover
    __version__ = "0.0.0"

__all__ = [
    "__version__",
    # Data
    "Dataset",
    "MetricRecord",
    "design_matrix",
    "parse_csv",
    "summary_stats",
    # Models
    "ModelSpec",
    "FittedModel",
    "PredictionResult",
    "fit",
    "predict",
    "BaselineModel",
    "LINEAR_LOC",
    "POWER_LOC",
    "baseline_predict",
    # Gate and verification
    "GateCriteria",
    "GateReport",
    "DEFAULT_CRITERIA",
    "TIGHT_CRITERIA",
    "evaluate_gate",
    "enumerate_rounds",
    "run_rounds",
    "compare_to_published",
    "VerificationCase",
    "VerificationOutcome",
    "verify_cases",
    "rank_candidates",
    # Diagnostics
    "ResidualDiagnostics",
    "compute_diagnostics",
    "render_plots",
    "write_plots",
    # Exceptions and units
    "DefectRegressionException",
    "DefectRegressionExceptionCode",
    "Q_",
    "ureg",
]
