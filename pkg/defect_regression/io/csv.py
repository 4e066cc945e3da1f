"""
Reading and writing the CSV documents of the package.

The documents are small comma-separated UTF-8 tables with a fixed header. Every cell is read as text
so that values are validated and located here instead of being silently coerced by pandas.
"""

import io
import logging
import math
from collections.abc import Sequence
from pathlib import Path
from typing import Final

import numpy as np
import pandas as pd
import regex

from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.typing import StrPath

logger = logging.getLogger(__name__)

NUMBER_PATTERN: Final = regex.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
"""Plain or scientific decimal notation, without thousands or locale separators."""


def read_table(text: str, columns: Sequence[str], *, source: str, exact: bool = True) -> pd.DataFrame:
    """Read a CSV document keeping every cell as text.

    Args:
        text:
            The CSV document. LF and CRLF line endings are accepted.

        columns:
            The expected columns.

        source:
            A name of the document used in the error messages (usually its path).

        exact:
            If True, the header must be exactly `columns`, in order. Otherwise the document must contain
            at least these columns, in any order, and may carry others.

    Returns:
        The data frame of the cells. The ``i``-th row (0-based) is the data row ``i + 1`` of the document.
    """
    text = text.removeprefix("\ufeff")
    # Enough positional columns for the widest line, so that no row is turned into an index
    width = max((line.count(",") + 1 for line in text.splitlines()), default=1)
    try:
        raw = pd.read_csv(
            io.StringIO(text),
            header=None,
            names=range(width),
            index_col=False,
            dtype=str,
            keep_default_na=False,
            engine="python",
        )
    except pd.errors.EmptyDataError:
        raw = pd.DataFrame()
    except pd.errors.ParserError as e:
        msg = f"The CSV document {source} is malformed: {str(e).strip()}"
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_CSV_VALUE) from e
    if raw.empty:
        msg = f"The CSV document {source} has no header."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_CSV_HEADER)

    # Cells past the end of a short line are NaN, empty cells are empty texts
    cell_counts = raw.notna().sum(axis=1).to_numpy()
    header = [str(c) for c in raw.iloc[0, : cell_counts[0]]]
    for row, count in enumerate(cell_counts[1:], start=1):
        if count != len(header):
            msg = f"Row {row} of {source} has {count} cell(s) but the header has {len(header)} column(s)."
            logger.error(msg)
            raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_CSV_VALUE)
    frame = pd.DataFrame(raw.iloc[1:, : len(header)].to_numpy(), columns=header, dtype=object)

    missing = [c for c in columns if c not in header]
    if missing:
        msg = f"Missing column(s) {', '.join(repr(c) for c in missing)} in the header of {source}."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_CSV_HEADER)
    if exact and header != list(columns):
        msg = f"The header of {source} must be exactly {','.join(columns)!r}, got {','.join(header)!r}."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_CSV_HEADER)
    return frame


def read_csv_text(path: StrPath) -> tuple[str, str]:
    """Read a CSV file as UTF-8 text.

    Returns:
        The text of the file and its name for the error messages.
    """
    path = Path(path).expanduser()
    try:
        return path.read_text(encoding="utf-8"), str(path)
    except UnicodeDecodeError as e:
        msg = f"The CSV document {path} is not valid UTF-8 text: byte {e.object[e.start]:#04x} at offset {e.start}."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_CSV_VALUE) from e


def parse_text(cell: object, *, row: int, column: str) -> str:
    """Check that a text cell is present."""
    if not isinstance(cell, str) or not cell.strip():
        msg = f"Row {row}, column {column!r}: missing value."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_CSV_VALUE)
    return cell


def parse_number(cell: object, *, row: int, column: str) -> float:
    """Parse a decimal cell.

    Args:
        cell:
            The raw cell as read by :func:`read_table`.

        row:
            The 1-based data row, for the error messages.

        column:
            The column name, for the error messages.

    Returns:
        The finite value of the cell.
    """
    text = parse_text(cell, row=row, column=column).strip()
    if NUMBER_PATTERN.fullmatch(text) is None:
        msg = f"Row {row}, column {column!r}: {text!r} is not a decimal number."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_CSV_VALUE)
    value = float(text)
    if not math.isfinite(value):
        msg = f"Row {row}, column {column!r}: {text!r} is out of range."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_CSV_VALUE)
    return value


def parse_whole_number(cell: object, *, row: int, column: str) -> int:
    """Parse a cell holding a whole number (``3``, ``3.0`` and ``3e0`` are all accepted)."""
    value = parse_number(cell, row=row, column=column)
    if not value.is_integer():
        msg = f"Row {row}, column {column!r}: {cell!r} is not a whole number."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_CSV_VALUE)
    return int(value)


def format_number(value: object) -> str:
    """The shortest text that reads back to the same number; integers are written without decimals."""
    if isinstance(value, bool | np.bool_):
        return "true" if value else "false"
    if isinstance(value, int | np.integer):
        return str(int(value))
    if isinstance(value, float | np.floating):
        return repr(float(value))
    return str(value)


def write_table(frame: pd.DataFrame) -> str:
    """Write a data frame (without its index) as a CSV document with LF line endings."""
    text_frame = frame.apply(lambda column: column.map(format_number)) if len(frame) else frame
    return text_frame.to_csv(index=False, lineterminator="\n")
