"""
Ordinary least squares fits with their inference statistics and intervals.
"""

import logging
import math
import time
import warnings
from collections.abc import Mapping
from dataclasses import dataclass, replace
from typing import Final

import numpy as np
import pandas as pd
from typing_extensions import Self

from defect_regression.dataset import Dataset, design_matrix
from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.io.dict import model_from_dict, model_to_dict
from defect_regression.models.prediction import PredictionResult
from defect_regression.models.spec import ModelSpec
from defect_regression.numerics import f_sf, qr_least_squares, t_quantile, t_sf, xtx_inverse
from defect_regression.typing import FloatArray, Id, JsonDict
from defect_regression.utils import JsonMixin

logger = logging.getLogger(__name__)

PERFECT_FIT_TOLERANCE: Final = 1e-12
"""A fit is perfect when ``sse <= (PERFECT_FIT_TOLERANCE)² · yᵀy``."""

DEFAULT_LEVEL: Final = 0.95


def _read_only(values: object) -> FloatArray:
    array = np.array(values, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class FittedModel(JsonMixin):
    """A linear model fitted by ordinary least squares.

    Use :func:`fit` to create one. The per-term arrays follow :attr:`term_names`.

    Attributes:
        spec:
            The fitted model specification.

        n:
            The number of observations.

        coefficients, std_errors, t_stats, p_values:
            The estimates and their inference statistics. p-values are two-sided.

        s:
            The residual standard error ``√(sse / (n − p))``, in units of the target.

        sse, sst:
            The residual and total sums of squares. ``sst`` is taken about the mean of the target when the
            model has an intercept and about zero otherwise.

        r_squared, adj_r_squared:
            The coefficient of determination and its adjustment for the number of terms.

        f_stat, f_p_value:
            The overall regression F test; NaN for intercept-only models.

        xtx_inv:
            The ``p × p`` matrix ``(XᵀX)⁻¹`` used by the standard errors and the intervals.

        fitted, residuals, project_ids:
            The fitted values and residuals of the observations, in data set order. They may be missing
            from a model loaded from a file.

        degenerate:
            True for a perfect fit (zero residual sum of squares). Standard errors are then zero, t
            statistics undefined (NaN) and p-values zero.
    """

    spec: ModelSpec
    n: int
    coefficients: FloatArray
    std_errors: FloatArray
    t_stats: FloatArray
    p_values: FloatArray
    s: float
    sse: float
    sst: float
    r_squared: float
    adj_r_squared: float
    f_stat: float
    f_p_value: float
    xtx_inv: FloatArray
    fitted: FloatArray | None = None
    residuals: FloatArray | None = None
    project_ids: tuple[Id, ...] | None = None
    degenerate: bool = False

    def __post_init__(self) -> None:
        for name in ("coefficients", "std_errors", "t_stats", "p_values", "xtx_inv"):
            object.__setattr__(self, name, _read_only(getattr(self, name)))
        for name in ("fitted", "residuals"):
            if getattr(self, name) is not None:
                object.__setattr__(self, name, _read_only(getattr(self, name)))
        if self.project_ids is not None:
            object.__setattr__(self, "project_ids", tuple(self.project_ids))

    def __repr__(self) -> str:
        return (
            f"<{type(self).__name__}: {self.spec.target} ~ {' + '.join(self.term_names)}, n={self.n}, "
            f"r_squared={self.r_squared:.6g}>"
        )

    @property
    def p(self) -> int:
        """The number of estimated coefficients."""
        return self.spec.n_terms

    @property
    def df(self) -> int:
        """The residual degrees of freedom ``n − p``."""
        return self.n - self.p

    @property
    def term_names(self) -> tuple[str, ...]:
        return self.spec.term_names

    @property
    def coefficient_map(self) -> dict[str, float]:
        return dict(zip(self.term_names, map(float, self.coefficients), strict=True))

    #
    # Prediction
    #
    def predict(
        self, x0: Mapping[str, float], level: float = DEFAULT_LEVEL, *, project_id: Id | None = None
    ) -> PredictionResult:
        """Predict the target for a new project.

        Args:
            x0:
                The value of every predictor of the model. Other keys are ignored.

            level:
                The confidence level of the intervals, in ``(0, 1)``.

            project_id:
                The name of the project, stored in the result.

        Returns:
            The point prediction with its prediction and confidence intervals.
        """
        if not (isinstance(level, int | float) and 0.0 < level < 1.0):
            msg = f"The interval level must be in (0, 1), got {level!r}."
            logger.error(msg)
            raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_LEVEL)
        missing = [name for name in self.spec.predictors if name not in x0]
        if missing:
            msg = f"Missing value(s) for the predictor(s) {', '.join(repr(m) for m in missing)}."
            logger.error(msg)
            raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.MISSING_PREDICTOR)
        values = []
        for name in self.spec.predictors:
            value = x0[name]
            if isinstance(value, bool) or not isinstance(value, int | float | np.number) or not math.isfinite(value):
                msg = f"The value of the predictor {name!r} must be a finite number, got {value!r}."
                logger.error(msg)
                raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_PREDICTOR_VALUE)
            values.append(float(value))

        x = np.array([1.0, *values] if self.spec.include_intercept else values, dtype=np.float64)
        point = float(x @ self.coefficients)
        leverage = max(0.0, float(x @ self.xtx_inv @ x))
        multiplier = t_quantile(0.5 * (1.0 + level), self.df) * self.s
        pi_half_width = multiplier * math.sqrt(1.0 + leverage)
        ci_half_width = multiplier * math.sqrt(leverage)
        return PredictionResult(
            point=point,
            pi_low=point - pi_half_width,
            pi_high=point + pi_half_width,
            ci_low=point - ci_half_width,
            ci_high=point + ci_half_width,
            level=float(level),
            leverage_term=leverage,
            project_id=project_id,
        )

    def predict_frame(self, frame: pd.DataFrame, level: float = DEFAULT_LEVEL) -> pd.DataFrame:
        """Predict every row of a data frame of predictor values indexed by project.

        Returns:
            A data frame indexed like `frame` with the columns ``point``, ``point_rounded``, ``pi_low``
            (clamped at zero), ``pi_high``, ``ci_low`` (clamped at zero), ``ci_high`` and ``leverage_term``.
        """
        missing = [name for name in self.spec.predictors if name not in frame.columns]
        if missing:
            msg = f"Missing column(s) for the predictor(s) {', '.join(repr(m) for m in missing)}."
            logger.error(msg)
            raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.MISSING_PREDICTOR)
        records = []
        for project_id, row in zip(frame.index, frame.to_dict(orient="records"), strict=True):
            result = self.predict(row, level=level, project_id=str(project_id))
            records.append(result.to_dict())
        index_name = frame.index.name or "project_id"
        columns = ["point", "point_rounded", "pi_low", "pi_high", "ci_low", "ci_high", "leverage_term"]
        res = pd.DataFrame.from_records(records, columns=["project_id", *columns]).set_index("project_id")
        res.index.name = index_name
        return res

    def evaluate(self, d: Dataset) -> Self:
        """A copy of the model with the fitted values and residuals computed on another data set."""
        x, y = design_matrix(d, self.spec)
        fitted = x @ self.coefficients
        return replace(self, fitted=fitted, residuals=y - fitted, project_ids=tuple(d.project_ids))

    #
    # Reports
    #
    def terms_frame(self) -> pd.DataFrame:
        """The coefficients and their inference statistics, one row per term."""
        return pd.DataFrame(
            {
                "coefficient": self.coefficients,
                "std_error": self.std_errors,
                "t_stat": self.t_stats,
                "p_value": self.p_values,
            },
            index=pd.Index(self.term_names, name="term"),
        )

    def summary(self) -> str:
        """A regression printout: the coefficient table then the goodness-of-fit footer."""
        header = ("Predictor", "Coef", "SE Coef", "T", "P")
        rows = [
            (name, _fmt(c), _fmt(se), _fmt(t), _fmt(p))
            for name, c, se, t, p in zip(
                self.term_names, self.coefficients, self.std_errors, self.t_stats, self.p_values, strict=True
            )
        ]
        name_width = max(len(header[0]), *(len(r[0]) for r in rows))
        widths = [name_width, *(max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header) if i > 0)]

        def line(cells: tuple[str, ...]) -> str:
            first = cells[0].ljust(widths[0])
            return "  ".join([first, *(c.rjust(w) for c, w in zip(cells[1:], widths[1:], strict=True))]).rstrip()

        predictors = ", ".join(self.spec.predictors) if self.spec.predictors else "(none)"
        lines = [
            f"The regression of {self.spec.target} on {predictors} (n = {self.n})",
            "",
            line(header),
            *(line(r) for r in rows),
            "",
            f"S = {_fmt(self.s)}   R-Sq = {_fmt(100.0 * self.r_squared)}%   "
            f"R-Sq(adj) = {_fmt(100.0 * self.adj_r_squared)}%",
            f"F = {_fmt(self.f_stat)}   P(F) = {_fmt(self.f_p_value)}",
        ]
        if self.degenerate:
            lines.append("The model fits the data exactly: the t statistics are undefined.")
        return "\n".join(lines) + "\n"

    #
    # Json Mixin interface
    #
    @classmethod
    def from_dict(cls, data: JsonDict) -> Self:
        res = cls(**model_from_dict(data))
        if res.residuals is None:
            logger.warning("The model document has no residuals: it cannot be used for diagnostics as is.")
        return res

    def _to_dict(self) -> JsonDict:
        return model_to_dict(self)


def _fmt(value: float) -> str:
    """Six significant digits; undefined values are shown as ``*``."""
    if not math.isfinite(value):
        return "*"
    return f"{value:.6g}"


def fit(d: Dataset, spec: ModelSpec) -> FittedModel:
    """Fit a model to a data set by ordinary least squares.

    Args:
        d:
            The data set, with more records than the model has terms.

        spec:
            The model specification.

    Returns:
        The fitted model with its inference statistics.
    """
    x, y = design_matrix(d, spec)
    n, p = x.shape
    if n <= p:
        msg = f"Insufficient degrees of freedom: {n} observation(s) for {p} parameter(s)."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.INSUFFICIENT_DEGREES_OF_FREEDOM)

    if spec.include_intercept:
        mean = math.fsum(y) / n
        sst = math.fsum((y - mean) ** 2)
    else:
        sst = math.fsum(y**2)
    if sst == 0.0:
        msg = f"The target {spec.target!r} is constant in {d.source}: undefined R² (zero total sum of squares)."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.UNDEFINED_R_SQUARED)

    start = time.perf_counter()
    beta, sse, qr = qr_least_squares(x, y)
    xtx_inv = xtx_inverse(qr)
    end = time.perf_counter()
    logger.debug(f"Fitted {spec.target} on {p} term(s) and {n} observation(s) in {end - start:.3} s.")

    df = n - p
    fitted = x @ beta
    residuals = y - fitted
    degenerate = sse <= PERFECT_FIT_TOLERANCE**2 * float(y @ y)
    if degenerate:
        warnings.warn(
            message=(
                f"The model of {spec.target!r} fits the data of {d.source} exactly: the standard errors are "
                f"zero and the t statistics are undefined."
            ),
            category=UserWarning,
            stacklevel=2,
        )
        sse = 0.0
        residuals = np.zeros(n)
        s = 0.0
        std_errors = np.zeros(p)
        t_stats = np.full(p, np.nan)
        p_values = np.zeros(p)
    else:
        s = math.sqrt(sse / df)
        std_errors = s * np.sqrt(np.diag(xtx_inv))
        t_stats = beta / std_errors
        p_values = np.array([min(1.0, 2.0 * t_sf(abs(t), df)) for t in t_stats])

    r_squared = min(1.0, max(0.0, 1.0 - sse / sst))
    dof_total = n - 1 if spec.include_intercept else n
    adj_r_squared = 1.0 - (1.0 - r_squared) * dof_total / df
    df_model = p - 1 if spec.include_intercept else p
    if df_model == 0 or degenerate:
        f_stat = math.nan
        f_p_value = math.nan if df_model == 0 else 0.0
    else:
        f_stat = ((sst - sse) / df_model) / (sse / df)
        f_p_value = f_sf(max(0.0, f_stat), df_model, df)

    return FittedModel(
        spec=spec,
        n=n,
        coefficients=beta,
        std_errors=std_errors,
        t_stats=t_stats,
        p_values=p_values,
        s=s,
        sse=sse,
        sst=sst,
        r_squared=r_squared,
        adj_r_squared=adj_r_squared,
        f_stat=f_stat,
        f_p_value=f_p_value,
        xtx_inv=xtx_inv,
        fitted=fitted,
        residuals=residuals,
        project_ids=tuple(d.project_ids),
        degenerate=degenerate,
    )


def predict(m: FittedModel, x0: Mapping[str, float], level: float = DEFAULT_LEVEL) -> PredictionResult:
    """Predict the target of a new project with a fitted model (see :meth:`FittedModel.predict`)."""
    return m.predict(x0, level=level)
