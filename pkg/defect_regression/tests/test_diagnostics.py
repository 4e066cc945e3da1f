from dataclasses import replace

import numpy as np
import numpy.testing as npt
import pytest

from defect_regression.diagnostics import (
    CSV_FILES,
    SVG_FILE,
    compute_diagnostics,
    normal_quantiles,
    render_plots,
    residual_histogram,
    sturges_bins,
    write_plots,
)
from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.io.csv import read_table
from defect_regression.models import FittedModel, ModelSpec, fit


def test_normal_quantiles():
    q = normal_quantiles(3)
    assert q[1] == 0.0
    assert q[0] == pytest.approx(-q[2])
    assert q[0] < 0.0

    q = normal_quantiles(14)
    assert len(q) == 14
    assert np.all(np.diff(q) > 0)
    npt.assert_allclose(q, -q[::-1], atol=1e-12)


@pytest.mark.parametrize(("n", "expected"), ((2, 2), (3, 3), (8, 4), (9, 5), (14, 5), (16, 5), (17, 6)))
def test_sturges_bins(n, expected):
    assert sturges_bins(n) == expected


def test_residual_histogram():
    edges, counts = residual_histogram(np.array([-1.0, 0.0, 0.0, 1.0]))
    assert len(counts) == 3
    assert edges[0] == -1.0
    assert edges[-1] == 1.0
    # The last bin is closed
    assert counts.tolist() == [1, 2, 1]

    edges, counts = residual_histogram(np.array([2.5, 2.5, 2.5]))
    assert edges.tolist() == [2.5, 2.5]
    assert counts.tolist() == [3]


def test_compute_diagnostics(round1_model):
    diag = compute_diagnostics(round1_model)
    assert diag.target == "functional_defects"
    assert diag.n == 14
    assert diag.n_bins == 5
    assert diag.bin_counts.sum() == 14
    assert diag.project_ids[0] == "Project A"
    npt.assert_array_equal(diag.residuals, round1_model.residuals)
    npt.assert_array_equal(diag.ordered_residuals, np.sort(round1_model.residuals))
    assert diag.bin_edges[0] == diag.ordered_residuals[0]
    assert diag.bin_edges[-1] == diag.ordered_residuals[-1]
    # The model has an intercept
    assert abs(diag.residuals.sum()) < 1e-8

    with pytest.raises(ValueError):
        diag.residuals[0] = 1.0

    frame = diag.vs_fitted()
    assert list(frame.columns) == ["fitted", "residual"]
    assert frame["fitted"].iloc[0] == pytest.approx(19.8046, abs=1e-3)
    assert list(diag.normal_plot().columns) == ["theoretical_quantile", "residual"]
    assert list(diag.histogram().columns) == ["bin_low", "bin_high", "count"]
    order = diag.vs_order()
    assert list(order.columns) == ["observation", "project_id", "residual"]
    assert order["observation"].tolist() == list(range(1, 15))


def test_compute_diagnostics_evaluated(table2, round1_model):
    # A model loaded from a file has no residuals until it is evaluated
    data = round1_model.to_dict()
    for key in ("project_ids", "fitted", "residuals"):
        data.pop(key)
    m = FittedModel.from_dict(data)
    with pytest.raises(DefectRegressionException) as e:
        compute_diagnostics(m)
    assert e.value.code == DefectRegressionExceptionCode.MISSING_RESIDUALS
    assert e.value.msg == (
        "The model of 'functional_defects' has no residuals. Evaluate it on a data set first with "
        "FittedModel.evaluate."
    )

    diag = compute_diagnostics(m.evaluate(table2))
    npt.assert_allclose(diag.residuals, round1_model.residuals, atol=1e-9)

    # Without names, the observations are numbered
    diag = compute_diagnostics(replace(round1_model, project_ids=None))
    assert diag.project_ids[:3] == ("1", "2", "3")


def test_compute_diagnostics_small(round1_model):
    m = replace(round1_model, fitted=round1_model.fitted[:1], residuals=round1_model.residuals[:1], project_ids=None)
    with pytest.raises(DefectRegressionException) as e:
        compute_diagnostics(m)
    assert e.value.code == DefectRegressionExceptionCode.NOT_ENOUGH_OBSERVATIONS
    assert e.value.msg == "Residual diagnostics need at least 2 observations, got 1."


def test_compute_diagnostics_perfect_fit(make_dataset):
    d = make_dataset({"kloc": [1.0, 2.0, 3.0, 4.0], "functional_defects": [5, 8, 11, 14]})
    with pytest.warns(UserWarning):
        m = fit(d, ModelSpec("functional_defects", ("kloc",)))
    diag = compute_diagnostics(m)
    assert diag.residuals.tolist() == [0.0, 0.0, 0.0, 0.0]
    assert diag.n_bins == 1
    assert diag.bin_counts.tolist() == [4]
    assert diag.histogram()["bin_low"].tolist() == [0.0]
    assert diag.histogram()["bin_high"].tolist() == [0.0]


def test_compute_diagnostics_perfect_fit_evaluated(make_dataset):
    d = make_dataset({"kloc": [1.0, 2.0, 3.0, 4.0], "functional_defects": [5, 8, 11, 14]})
    with pytest.warns(UserWarning):
        m = fit(d, ModelSpec("functional_defects", ("kloc",)))
    assert m.degenerate

    # Other projects do not follow the exact line
    other = make_dataset({"kloc": [1.0, 2.0, 3.0, 4.0], "functional_defects": [6, 8, 11, 13]})
    evaluated = m.evaluate(other)
    diag = compute_diagnostics(evaluated)
    npt.assert_allclose(diag.residuals, [1.0, 0.0, 0.0, -1.0], atol=1e-9)
    npt.assert_array_equal(diag.residuals, evaluated.residuals)
    assert diag.bin_counts.sum() == 4
    assert diag.bin_edges[0] == pytest.approx(-1.0)
    assert diag.bin_edges[-1] == pytest.approx(1.0)


def test_render_plots_csv(round1_model):
    diag = compute_diagnostics(round1_model)
    documents = render_plots(diag)
    assert list(documents) == list(CSV_FILES)
    assert documents == render_plots(diag, format="csv")

    assert documents["residuals_vs_fitted.csv"].splitlines()[0] == "fitted,residual"
    assert documents["normal_plot.csv"].splitlines()[0] == "theoretical_quantile,residual"
    assert documents["histogram.csv"].splitlines()[0] == "bin_low,bin_high,count"
    assert documents["residuals_vs_order.csv"].splitlines()[0] == "observation,project_id,residual"

    # The shortest representation reads back to the same values
    frame = read_table(documents["residuals_vs_fitted.csv"], ("fitted", "residual"), source="residuals_vs_fitted.csv")
    npt.assert_array_equal(frame["residual"].astype(float).to_numpy(), diag.residuals)
    histogram = read_table(documents["histogram.csv"], ("bin_low", "bin_high", "count"), source="histogram.csv")
    assert histogram["count"].astype(int).sum() == 14

    with pytest.raises(DefectRegressionException) as e:
        render_plots(diag, format="png")  # type: ignore[arg-type]
    assert e.value.code == DefectRegressionExceptionCode.BAD_FORMAT
    assert e.value.msg == "Unsupported diagnostics format 'png'. Expected one of csv, svg."


def test_render_plots_svg(round1_model):
    pytest.importorskip("matplotlib")
    diag = compute_diagnostics(round1_model)
    documents = render_plots(diag, format="svg")
    assert list(documents) == [SVG_FILE]
    svg = documents[SVG_FILE]
    assert svg.lstrip().startswith("<?xml")
    assert "</svg>" in svg
    # Same diagnostics, same bytes
    assert render_plots(diag, format="svg") == documents


def test_write_plots(round1_model, tmp_path):
    diag = compute_diagnostics(round1_model)
    out_dir = tmp_path / "nested" / "plots"
    paths = write_plots(diag, out_dir)
    assert [p.name for p in paths] == list(CSV_FILES)
    assert all(p.parent == out_dir for p in paths)
    first = {p.name: p.read_bytes() for p in paths}
    assert b"\r\n" not in first["histogram.csv"]

    write_plots(diag, out_dir)
    assert {p.name: p.read_bytes() for p in paths} == first
