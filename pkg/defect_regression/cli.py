"""
The command line interface: ``defect-regression fit|rounds|predict|verify|diagnose|baseline``.

Exit codes: 0 on success, 2 for an input or usage error, 3 for a numerical or fit error and 4 when
``rounds --strict`` finds no round passing the gate.
"""

import logging
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Final

import pandas as pd
import typer

from defect_regression.dataset import Dataset, read_metrics
from defect_regression.diagnostics import PLOT_FORMATS, compute_diagnostics, write_plots
from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.gate import GateCriteria, compare_to_published, rounds_frame, run_rounds
from defect_regression.io.csv import write_table
from defect_regression.models import DEFAULT_LEVEL, LINEAR_LOC, POWER_LOC, FittedModel, ModelSpec, baseline_predict, fit
from defect_regression.units import Q_
from defect_regression.utils import set_logging_config
from defect_regression.verification import cases_from_predictions, read_cases, verify_candidates, write_cases

logger = logging.getLogger(__name__)

EXIT_INPUT_ERROR: Final = 2
EXIT_NUMERICAL_ERROR: Final = 3
EXIT_GATE_FAILURE: Final = 4

OUTPUT_FORMATS: Final = ("text", "csv")
LOC_UNITS: Final = ("loc", "kloc")

app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
    pretty_exceptions_enable=False,
    help="Fit, gate and apply regression models predicting system-testing defects.",
)

DATA_OPTION = typer.Option(..., "--data", help="The data set CSV file.", dir_okay=False)
MODEL_OPTION = typer.Option(..., "--model", help="A model JSON file written by `fit` or `rounds`.", dir_okay=False)
LEVEL_OPTION = typer.Option(DEFAULT_LEVEL, "--level", help="The level of the intervals, in (0, 1).")


def _format_float(value: float) -> str:
    return f"{value:.6g}"


def _table(frame: pd.DataFrame) -> str:
    return frame.to_string(float_format=_format_float) + "\n"


@contextmanager
def _exit_on_error() -> Iterator[None]:
    """Report the errors of a command on the standard error and exit with their code."""
    try:
        yield
    except DefectRegressionException as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(EXIT_NUMERICAL_ERROR if e.code.is_numerical else EXIT_INPUT_ERROR) from e
    except OSError as e:
        reason = e.strerror or str(e)
        typer.echo(f"Error: {reason}: {e.filename}" if e.filename else f"Error: {reason}", err=True)
        raise typer.Exit(EXIT_INPUT_ERROR) from e
    except ImportError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(EXIT_INPUT_ERROR) from e


def _check_choice(value: str, choices: tuple[str, ...], option: str) -> None:
    if value not in choices:
        msg = f"Unsupported value {value!r} for {option}. Expected one of {', '.join(choices)}."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_FORMAT)


@app.callback()
def main(
    verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="Log more details (repeat for debug)."),
) -> None:
    set_logging_config("warning" if verbose == 0 else "info" if verbose == 1 else "debug")


@app.command("fit")
def fit_command(
    data: Path = DATA_OPTION,
    target: str = typer.Option(..., "--target", help="The column to predict."),
    predictors: str = typer.Option(..., "--predictors", help="Comma-separated predictor columns."),
    no_intercept: bool = typer.Option(False, "--no-intercept", help="Fit the model without a constant term."),
    out: Path = typer.Option(..., "--out", help="The model JSON file to write.", dir_okay=False),
) -> None:
    """Fit a model on a data set, write it and print its summary."""
    with _exit_on_error():
        spec = ModelSpec.from_names(target, predictors, include_intercept=not no_intercept)
        model = fit(Dataset.from_csv(data), spec)
        model.to_json(out)
    typer.echo(model.summary(), nl=False)


@app.command("rounds")
def rounds_command(
    data: Path = DATA_OPTION,
    gate: str = typer.Option(
        "default", "--gate", help="The gate criteria, 'p=0.05,r2=0.85,adj=0.85' or a preset (default, tight)."
    ),
    out: Path = typer.Option(..., "--out", help="The directory of the model files round1.json to round4.json."),
    strict: bool = typer.Option(False, "--strict", help="Exit with code 4 when no round passes the gate."),
) -> None:
    """Fit the four regression rounds and gate them."""
    with _exit_on_error():
        criteria = GateCriteria.parse(gate)
        results = run_rounds(Dataset.from_csv(data), criteria)
        out.expanduser().mkdir(parents=True, exist_ok=True)
        for result in results:
            result.model.to_json(out.expanduser() / f"round{result.config.round_id}.json")
        comparison = compare_to_published(results[0].model)
    typer.echo(_table(rounds_frame(results)), nl=False)
    typer.echo("")
    typer.echo("Round 1 against the published equation:")
    typer.echo(_table(comparison), nl=False)
    if strict and not any(result.report.passed for result in results):
        typer.echo("Error: no round passes the gate.", err=True)
        raise typer.Exit(EXIT_GATE_FAILURE)


@app.command("predict")
def predict_command(
    model: Path = MODEL_OPTION,
    input: Path = typer.Option(..., "--input", help="A CSV file of the predictors of new projects.", dir_okay=False),
    level: float = LEVEL_OPTION,
    format: str = typer.Option("text", "--format", help="The output format: text or csv."),
    cases_out: Path | None = typer.Option(
        None, "--cases-out", help="Also write verification cases (the input must hold the target).", dir_okay=False
    ),
    candidate: str = typer.Option("candidate", "--candidate", help="The candidate name of the verification cases."),
) -> None:
    """Predict the target of new projects with their prediction and confidence intervals."""
    with _exit_on_error():
        _check_choice(format, OUTPUT_FORMATS, "--format")
        m = FittedModel.from_json(model)
        frame = read_metrics(input, m.spec.predictors, optional=(m.spec.target,))
        predictions = m.predict_frame(frame, level=level)
        if cases_out is not None:
            write_cases(cases_from_predictions(m, frame, candidate, level=level), cases_out)
    if format == "csv":
        typer.echo(write_table(predictions.reset_index()), nl=False)
    else:
        typer.echo(_table(predictions), nl=False)


@app.command("verify")
def verify_command(
    cases: Path = typer.Option(..., "--cases", help="The verification cases CSV file.", dir_okay=False),
) -> None:
    """Check verification cases against their prediction intervals and rank the candidates."""
    with _exit_on_error():
        all_cases = read_cases(cases)
        outcomes, ranking = verify_candidates(all_cases)
    per_case = pd.concat([outcome.to_frame() for outcome in outcomes.values()])
    summary = pd.DataFrame.from_records(
        [
            {
                "candidate": name,
                "cases": len(outcomes[name].outcomes),
                "predicted_in_pi": outcomes[name].n_predicted_in_pi,
                "actual_in_pi": outcomes[name].n_actual_in_pi,
                "mean_relative_width": outcomes[name].mean_relative_width,
            }
            for name in ranking
        ]
    )
    summary.index = pd.RangeIndex(1, len(summary) + 1, name="rank")
    typer.echo(_table(per_case), nl=False)
    typer.echo("")
    typer.echo(
        f"{int(per_case['predicted_in_pi'].sum())} of {len(per_case)} prediction(s) and "
        f"{int(per_case['actual_in_pi'].sum())} of {len(per_case)} actual value(s) fall in their interval."
    )
    typer.echo("")
    typer.echo(_table(summary), nl=False)


@app.command("diagnose")
def diagnose_command(
    model: Path = MODEL_OPTION,
    data: Path = DATA_OPTION,
    out: Path = typer.Option(..., "--out", help="The directory of the diagnostics files."),
    format: str = typer.Option("csv", "--format", help=f"The output format: {' or '.join(PLOT_FORMATS)}."),
) -> None:
    """Write the residual diagnostics of a model evaluated on a data set."""
    with _exit_on_error():
        _check_choice(format, PLOT_FORMATS, "--format")
        m = FittedModel.from_json(model).evaluate(Dataset.from_csv(data))
        paths = write_plots(compute_diagnostics(m), out, format=format)  # type: ignore[arg-type]
    for path in paths:
        typer.echo(f"Wrote {path}")


@app.command("baseline")
def baseline_command(
    loc: float = typer.Option(..., "--loc", help="The code size."),
    unit: str = typer.Option("loc", "--unit", help="The unit of the code size: loc or kloc."),
) -> None:
    """Predict the defects from the code size with the historical baselines."""
    with _exit_on_error():
        _check_choice(unit, LOC_UNITS, "--unit")
        size = Q_(loc, unit)
        values = [(b, baseline_predict(b, size)) for b in (LINEAR_LOC, POWER_LOC)]
    for b, value in values:
        typer.echo(f"{b.id}: {_format_float(value)}  ({b.equation})")
