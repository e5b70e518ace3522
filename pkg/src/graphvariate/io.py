"""CSV ingestion and matrix output.

Signals are stored one node per row and one sample per column.  An optional
first row of sample indices and an optional first column of node labels are
recognised because they are not entirely numeric.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .signals import MultivariateSignal

FLOAT_FORMAT = "%.17g"


class CsvFormatError(ValueError):
    """The file is readable but is not a rectangular numeric table."""


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _read_rows(path) -> list[list[str]]:
    with open(path, newline="") as fh:
        rows = [[c.strip() for c in row] for row in csv.reader(fh)]
    rows = [r for r in rows if any(r)]
    if not rows:
        raise CsvFormatError(f"{path}: empty file")
    width = len(rows[0])
    for k, row in enumerate(rows):
        if len(row) != width:
            raise CsvFormatError(f"{path}: row {k + 1} has {len(row)} cells, expected {width}")
    return rows


def ingest_csv(path, sample_rate: float = 1.0) -> MultivariateSignal:
    """Read a node-by-sample table.

    The first column holds labels when any cell below the first row is
    non-numeric.  The first row is a header when any of its cells outside
    the label column is non-numeric, or when a label column exists and the
    top-left cell is blank.  A header of purely numeric sample indices
    therefore needs a blank top-left cell to be recognised.
    """
    rows = _read_rows(path)
    has_labels = any(not _is_number(r[0]) for r in rows[1:])
    first = rows[0][1:] if has_labels else rows[0]
    has_header = any(not _is_number(c) for c in first) or (has_labels and rows[0][0] == "")
    body = rows[1:] if has_header else rows
    labels = tuple(r[0] for r in body) if has_labels else None
    cells = [r[1:] if has_labels else r for r in body]
    try:
        data = np.array([[float(c) for c in r] for r in cells], dtype=float)
    except ValueError as exc:
        raise CsvFormatError(f"{path}: non-numeric cell in data block ({exc})") from None
    if data.ndim != 2 or data.shape[0] < 2 or data.shape[1] < 2:
        raise CsvFormatError(f"{path}: need at least 2 rows and 2 columns, got {data.shape}")
    return MultivariateSignal(data, sample_rate=sample_rate, node_labels=labels)


def read_matrix(path) -> np.ndarray:
    """Read a plain numeric matrix (no header or labels)."""
    rows = _read_rows(path)
    try:
        return np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise CsvFormatError(f"{path}: non-numeric cell ({exc})") from None


def write_matrix(path, matrix, labels=None, header=None) -> Path:
    """Write ``matrix`` with 17 significant digits so values survive a round trip."""
    path = Path(path)
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header is not None:
            w.writerow(([""] if labels is not None else []) + [str(h) for h in header])
        for k, row in enumerate(m):
            cells = [FLOAT_FORMAT % v for v in row]
            w.writerow(([labels[k]] if labels is not None else []) + cells)
    return path


def write_table(path, columns: list[str], rows) -> Path:
    """Long-format table; floats get 17 significant digits."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([FLOAT_FORMAT % v if isinstance(v, float) else v for v in row])
    return path


def write_signal(path, signal: MultivariateSignal) -> Path:
    return write_matrix(path, signal.data, labels=signal.node_labels)
