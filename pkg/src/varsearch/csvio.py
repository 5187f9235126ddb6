"""Strict CSV reading and writing.

The accepted dialect is deliberately narrow: comma separator, dot decimal
point, one header row of names matching ``[A-Za-z0-9_]+``, every row the
same width, every cell a finite number.  Anything else raises a specific
``CsvError`` subclass naming the offending row or cell.  Written files
use ``repr`` for floats so a write/read round trip is exact.
"""

from __future__ import annotations

import csv
import io
import math
import re

import numpy as np

from .errors import (
    CsvError,
    DuplicateNameError,
    EmptyCsvError,
    InvalidHeaderError,
    MissingColumnError,
    NonNumericCellError,
    RaggedRowError,
)
from .model import Role, TimeSeriesDataset

__all__ = [
    "read_matrix_csv",
    "load_dataset",
    "load_future_matrix",
    "format_csv",
    "write_csv",
]

_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")


def read_matrix_csv(path) -> tuple:
    """Read a strict CSV file into (names, matrix).

    ``path`` may be a filesystem path or a text file object.  Row numbers
    in errors are 1-based file lines, the header being line 1.
    """
    if hasattr(path, "read"):
        return _parse(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return _parse(fh)


def _parse(fh) -> tuple:
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyCsvError("file has no header row") from None
    if not header:
        raise EmptyCsvError("header row is empty")
    names = []
    for cell in header:
        if not _NAME_RE.match(cell):
            raise InvalidHeaderError(cell)
        if cell in names:
            raise DuplicateNameError(cell)
        names.append(cell)
    width = len(names)
    rows = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != width:
            raise RaggedRowError(line_no, width, len(row))
        parsed = []
        for name, cell in zip(names, row):
            try:
                value = float(cell)
            except ValueError:
                raise NonNumericCellError(line_no, name, cell) from None
            if not math.isfinite(value):
                raise NonNumericCellError(line_no, name, cell)
            parsed.append(value)
        rows.append(parsed)
    if not rows:
        raise EmptyCsvError("file has a header but no data rows")
    return tuple(names), np.array(rows, dtype=float)


def load_dataset(path, dependent=None, independent=None) -> TimeSeriesDataset:
    """Read a CSV file and assign variable roles by column name.

    With neither list every column is dependent.  Naming only one side
    sends the remaining columns to the other.  Naming both requires the
    two lists to partition the header exactly.
    """
    names, matrix = read_matrix_csv(path)
    dependent = list(dependent or [])
    independent = list(independent or [])
    for name in dependent + independent:
        if name not in names:
            raise MissingColumnError(name)
    overlap = set(dependent) & set(independent)
    if overlap:
        raise CsvError(
            f"columns named as both dependent and independent: "
            f"{sorted(overlap)}"
        )
    if dependent and independent:
        leftover = [n for n in names if n not in dependent and n not in independent]
        if leftover:
            raise CsvError(
                f"columns {leftover} assigned to neither role; when both "
                f"role lists are given they must cover every column"
            )
        roles = [
            Role.DEPENDENT if n in dependent else Role.INDEPENDENT for n in names
        ]
    elif dependent:
        roles = [
            Role.DEPENDENT if n in dependent else Role.INDEPENDENT for n in names
        ]
    elif independent:
        roles = [
            Role.INDEPENDENT if n in independent else Role.DEPENDENT for n in names
        ]
    else:
        roles = [Role.DEPENDENT] * len(names)
    return TimeSeriesDataset(
        observations=matrix, names=tuple(names), roles=tuple(roles)
    )


def load_future_matrix(path, expected_names) -> np.ndarray:
    """Read future independent-variable rows, reordered to expected_names."""
    names, matrix = read_matrix_csv(path)
    expected = list(expected_names)
    for name in expected:
        if name not in names:
            raise MissingColumnError(name)
    extra = [n for n in names if n not in expected]
    if extra:
        raise CsvError(f"unexpected columns {extra}; expected {expected}")
    order = [names.index(n) for n in expected]
    return matrix[:, order]


def format_csv(names, matrix) -> str:
    """CSV text with repr floats; exact under a read round trip."""
    matrix = np.asarray(matrix, dtype=float)
    for name in names:
        if not _NAME_RE.match(str(name)):
            raise InvalidHeaderError(str(name))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(names))
    for row in matrix:
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def write_csv(path, names, matrix) -> None:
    text = format_csv(names, matrix)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
