"""
Residual diagnostics of a fitted model: residuals against the fitted values, normal probability plot,
histogram and residuals against the observation order.
"""

import logging
import math
from dataclasses import dataclass
from io import BytesIO
from pathlib import Path
from typing import Final, Literal

import numpy as np
import pandas as pd
from scipy import stats

from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.io.csv import write_table
from defect_regression.models import FittedModel
from defect_regression.typing import FloatArray, Id, StrPath
from defect_regression.utils import _optional_deps

logger = logging.getLogger(__name__)

PlotFormat = Literal["csv", "svg"]
PLOT_FORMATS: Final = ("csv", "svg")

CSV_FILES: Final = ("residuals_vs_fitted.csv", "normal_plot.csv", "histogram.csv", "residuals_vs_order.csv")
SVG_FILE: Final = "residuals.svg"

_SVG_HASH_SALT: Final = "defect-regression"


def _read_only(values: object, dtype: type = np.float64) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ResidualDiagnostics:
    """The four residual views of a fitted model.

    Every view holds one entry per observation; the histogram counts sum to the number of observations.

    Attributes:
        target:
            The name of the modelled target, used in the titles of the plots.

        project_ids:
            The observations, in data set order.

        fitted, residuals:
            The fitted values and the residuals, in data set order.

        theoretical_quantiles, ordered_residuals:
            The normal probability plot: the standard normal quantiles of the plotting positions
            ``(i − 0.375) / (n + 0.25)`` against the residuals sorted in ascending order.

        bin_edges, bin_counts:
            The histogram of the residuals. Bins are right-open except the last one.
    """

    target: str
    project_ids: tuple[Id, ...]
    fitted: FloatArray
    residuals: FloatArray
    theoretical_quantiles: FloatArray
    ordered_residuals: FloatArray
    bin_edges: FloatArray
    bin_counts: np.ndarray

    def __post_init__(self) -> None:
        for name in ("fitted", "residuals", "theoretical_quantiles", "ordered_residuals", "bin_edges"):
            object.__setattr__(self, name, _read_only(getattr(self, name)))
        object.__setattr__(self, "bin_counts", _read_only(self.bin_counts, dtype=np.int64))
        object.__setattr__(self, "project_ids", tuple(self.project_ids))

    @property
    def n(self) -> int:
        """The number of observations."""
        return len(self.residuals)

    @property
    def n_bins(self) -> int:
        return len(self.bin_counts)

    #
    # Views
    #
    def vs_fitted(self) -> pd.DataFrame:
        return pd.DataFrame({"fitted": self.fitted, "residual": self.residuals})

    def normal_plot(self) -> pd.DataFrame:
        return pd.DataFrame({"theoretical_quantile": self.theoretical_quantiles, "residual": self.ordered_residuals})

    def histogram(self) -> pd.DataFrame:
        return pd.DataFrame({"bin_low": self.bin_edges[:-1], "bin_high": self.bin_edges[1:], "count": self.bin_counts})

    def vs_order(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "observation": np.arange(1, self.n + 1, dtype=np.int64),
                "project_id": list(self.project_ids),
                "residual": self.residuals,
            }
        )


def normal_quantiles(n: int) -> FloatArray:
    """The standard normal quantiles of the plotting positions ``(i − 0.375) / (n + 0.25)``, ``i = 1..n``."""
    positions = (np.arange(1, n + 1, dtype=np.float64) - 0.375) / (n + 0.25)
    return stats.norm.ppf(positions)


def sturges_bins(n: int) -> int:
    """The number of histogram bins of Sturges' rule, ``⌈log2 n⌉ + 1``."""
    return math.ceil(math.log2(n)) + 1


def residual_histogram(residuals: FloatArray) -> tuple[FloatArray, np.ndarray]:
    """Bin the residuals in equal-width bins spanning their range.

    When every residual is equal, a single zero-width bin holds all of them.

    Returns:
        The ``k + 1`` bin edges and the ``k`` counts.
    """
    low, high = float(np.min(residuals)), float(np.max(residuals))
    if low == high:
        return np.array([low, high]), np.array([len(residuals)], dtype=np.int64)
    counts, edges = np.histogram(residuals, bins=sturges_bins(len(residuals)), range=(low, high))
    return edges, counts.astype(np.int64)


def compute_diagnostics(m: FittedModel) -> ResidualDiagnostics:
    """Compute the residual views of a fitted model.

    Args:
        m:
            A model holding its fitted values and residuals, either fresh from :func:`~defect_regression.fit`
            or evaluated on a data set with :meth:`~defect_regression.FittedModel.evaluate`.

    Returns:
        The four views. The residuals of a perfect fit are all zero.
    """
    if m.fitted is None or m.residuals is None:
        msg = (
            f"The model of {m.spec.target!r} has no residuals. Evaluate it on a data set first with "
            f"FittedModel.evaluate."
        )
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.MISSING_RESIDUALS)
    n = len(m.residuals)
    if n < 2:
        msg = f"Residual diagnostics need at least 2 observations, got {n}."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.NOT_ENOUGH_OBSERVATIONS)

    residuals = np.asarray(m.residuals, dtype=np.float64)
    project_ids = m.project_ids if m.project_ids is not None else tuple(str(i) for i in range(1, n + 1))
    bin_edges, bin_counts = residual_histogram(residuals)
    return ResidualDiagnostics(
        target=m.spec.target,
        project_ids=project_ids,
        fitted=m.fitted,
        residuals=residuals,
        theoretical_quantiles=normal_quantiles(n),
        ordered_residuals=np.sort(residuals, kind="stable"),
        bin_edges=bin_edges,
        bin_counts=bin_counts,
    )


#
# Rendering
#
def _render_svg(diag: ResidualDiagnostics) -> str:
    """A four-panel figure: vs fitted and normal plot on top, histogram and vs order at the bottom."""
    matplotlib = _optional_deps.matplotlib
    figure = _optional_deps.matplotlib_figure.Figure(figsize=(10, 7.5), layout="constrained")
    (ax_fitted, ax_normal), (ax_hist, ax_order) = figure.subplots(2, 2)

    ax_fitted.scatter(diag.fitted, diag.residuals, s=18, color="tab:blue")
    ax_fitted.axhline(0.0, color="grey", linewidth=0.8)
    ax_fitted.set_xlabel("Fitted Value")
    ax_fitted.set_ylabel("Residual")
    ax_fitted.set_title("Versus Fits")

    ax_normal.scatter(diag.ordered_residuals, diag.theoretical_quantiles, s=18, color="tab:blue")
    if diag.ordered_residuals[-1] > diag.ordered_residuals[0]:
        scale = float(np.std(diag.residuals, ddof=1))
        mean = float(np.mean(diag.residuals))
        q = np.array([diag.theoretical_quantiles[0], diag.theoretical_quantiles[-1]])
        ax_normal.plot(mean + scale * q, q, color="tab:red", linewidth=0.8)
    ax_normal.set_xlabel("Residual")
    ax_normal.set_ylabel("Normal Score")
    ax_normal.set_title("Normal Probability Plot")

    ax_hist.bar(
        diag.bin_edges[:-1],
        diag.bin_counts,
        width=np.diff(diag.bin_edges),
        align="edge",
        color="tab:blue",
        edgecolor="black",
    )
    ax_hist.set_xlabel("Residual")
    ax_hist.set_ylabel("Frequency")
    ax_hist.set_title("Histogram")

    ax_order.plot(np.arange(1, diag.n + 1), diag.residuals, marker="o", markersize=4, color="tab:blue")
    ax_order.axhline(0.0, color="grey", linewidth=0.8)
    ax_order.set_xlabel("Observation Order")
    ax_order.set_ylabel("Residual")
    ax_order.set_title("Versus Order")

    figure.suptitle(f"Residual Plots for {diag.target}")
    buffer = BytesIO()
    with matplotlib.rc_context({"svg.hashsalt": _SVG_HASH_SALT}):
        figure.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue().decode("utf-8")


def render_plots(diag: ResidualDiagnostics, format: PlotFormat = "csv") -> dict[str, str]:
    """Render the diagnostics as documents.

    Args:
        diag:
            The diagnostics to render.

        format:
            ``"csv"`` for one CSV document per view or ``"svg"`` for a single four-panel figure. The SVG
            format requires matplotlib (the ``plot`` extra).

    Returns:
        The documents by file name. Rendering the same diagnostics twice gives identical documents.
    """
    if format == "csv":
        views = (diag.vs_fitted(), diag.normal_plot(), diag.histogram(), diag.vs_order())
        return {name: write_table(view) for name, view in zip(CSV_FILES, views, strict=True)}
    elif format == "svg":
        return {SVG_FILE: _render_svg(diag)}
    else:
        msg = f"Unsupported diagnostics format {format!r}. Expected one of {', '.join(PLOT_FORMATS)}."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_FORMAT)


def write_plots(diag: ResidualDiagnostics, out_dir: StrPath, format: PlotFormat = "csv") -> list[Path]:
    """Render the diagnostics and write the documents in a directory (created if needed).

    Returns:
        The paths of the written files.
    """
    documents = render_plots(diag, format=format)
    out_dir = Path(out_dir).expanduser()
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in documents.items():
        path = out_dir / name
        path.write_text(text, encoding="utf-8", newline="")
        paths.append(path)
    logger.debug(f"Wrote {len(paths)} diagnostics file(s) to {str(out_dir)!r}.")
    return paths
