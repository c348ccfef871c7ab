"""Read one numeric column from a CSV file or a JSON-lines file.

Cells are parsed as plain numeric literals: integers, decimals and
scientific notation, with an optional sign. Thousands separators and
decimal commas are not guessed; such cells count as non-numeric.

Literals are read exactly as `Decimal` and reduced to their significand
before anything is converted to float, so integers with thousands of
digits keep their leading digits.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path
from typing import Any, Generator, Iterable
from warnings import warn

import numpy as np
import numpy.typing as npt
import pandas as pd  # type: ignore

from config import MAX_ROWS, NON_NUMERIC_TOLERANCE, BudgetExceeded
from significand import significand_of_decimal

NUMBER_PATTERN = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")

# decimal exponents beyond this are not numbers anyone means
MAX_EXPONENT = 10**15


class DataError(Exception):
    pass


@dataclass
class NumericColumn:
    """`significands` holds sign * S(x) per numeric cell, 0 for zeros.

    `values` is the float view of the same cells; magnitudes outside the
    float range saturate to +-inf or 0 there.
    """

    values: npt.NDArray[np.float64]
    significands: npt.NDArray[np.float64]
    n_rows: int
    n_non_numeric: int

    @property
    def non_numeric_fraction(self) -> float:
        return self.n_non_numeric / self.n_rows if self.n_rows else 0.0


def parse_number(cell: Any) -> Decimal | None:
    """The cell's exact value, or None when it is not a plain numeric literal."""
    if isinstance(cell, bool) or cell is None:
        return None
    if isinstance(cell, Decimal):
        value = cell
    elif isinstance(cell, (int, float)):
        if isinstance(cell, float) and not np.isfinite(cell):
            return None
        value = Decimal(cell)
    else:
        text = str(cell).strip()
        if not NUMBER_PATTERN.fullmatch(text):
            return None
        try:
            value = Decimal(text)
        except ArithmeticError:
            return None
    if not value.is_finite() or abs(value.adjusted()) > MAX_EXPONENT:
        return None
    return value


def _collect(cells: Iterable[Any], lenient: bool, source: str) -> NumericColumn:
    values = []
    significands = []
    n_rows = 0
    n_non_numeric = 0
    for cell in cells:
        n_rows += 1
        if n_rows > MAX_ROWS:
            raise BudgetExceeded(f"{source} has more than {MAX_ROWS} rows")
        value = parse_number(cell)
        if value is None:
            n_non_numeric += 1
            continue
        decomposition = significand_of_decimal(value)
        significands.append(decomposition.sign * decomposition.significand)
        values.append(float(value))
    column = NumericColumn(
        np.array(values, dtype=np.float64),
        np.array(significands, dtype=np.float64),
        n_rows,
        n_non_numeric,
    )
    if n_rows == 0:
        raise DataError(f"{source}: no rows")
    if n_non_numeric:
        message = (
            f"{source}: {n_non_numeric} of {n_rows} cells are not numeric"
            f" ({column.non_numeric_fraction:.1%})"
        )
        if column.non_numeric_fraction > NON_NUMERIC_TOLERANCE and not lenient:
            raise DataError(message + f", above the {NON_NUMERIC_TOLERANCE:.0%} tolerance")
        warn(message)
    if not len(column.values):
        raise DataError(f"{source}: no numeric value")
    return column


def read_csv_column(path: str | Path, column: str, lenient: bool = False) -> NumericColumn:
    """`column` is a header name, or a 0-based index when it is all digits."""
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, nrows=MAX_ROWS + 1)
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise DataError(f"{path}: unreadable CSV ({e})")
    if column in df.columns:
        series = df[column]
    elif column.isdigit() and int(column) < len(df.columns):
        series = df.iloc[:, int(column)]
    else:
        raise DataError(f"{path}: no column '{column}' (have {list(df.columns)})")
    return _collect(series, lenient, str(path))


def iter_jsonl(path: str | Path) -> Generator[dict[str, Any], None, None]:
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line, parse_float=Decimal)
            except json.JSONDecodeError as e:
                raise DataError(f"{path}:{number}: invalid JSON ({e.msg})")
            if not isinstance(record, dict):
                raise DataError(f"{path}:{number}: expected a JSON object")
            yield record


def read_jsonl_field(path: str | Path, key: str, lenient: bool = False) -> NumericColumn:
    return _collect((record.get(key) for record in iter_jsonl(path)), lenient, str(path))


def read_numeric(
    path: str | Path, column: str, fmt: str | None = None, lenient: bool = False
) -> NumericColumn:
    """Dispatch on `fmt` ("csv" or "jsonl"), else on the file extension."""
    if fmt is None:
        fmt = "jsonl" if Path(path).suffix in (".jsonl", ".jsonlines", ".ndjson") else "csv"
    if fmt == "csv":
        return read_csv_column(path, column, lenient)
    if fmt == "jsonl":
        return read_jsonl_field(path, column, lenient)
    raise DataError(f"unknown format '{fmt}'")
