"""CSV writers for node embeddings and sweep tables.

Floats are written with repr(), which round-trips doubles exactly and never
uses locale formatting.
"""

import csv
import io
import sys
from pathlib import Path
from typing import Iterable, Optional, TextIO

import numpy as np

from ..errors import DataError, ShapeError


def _cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (np.integer,)):
        return str(int(value))
    if value is None:
        return ""
    return str(value)


def write_csv(rows: Iterable[dict], fieldnames: list[str], stream: TextIO):
    """Write rows with a header to an open text stream."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([_cell(row.get(name)) for name in fieldnames])


def export_csv(rows: list[dict], path: Optional[str | Path], fieldnames: Optional[list[str]] = None):
    """
    Write rows to `path`, or to stdout when path is None or "-".

    Args:
        rows: one dict per line
        path: output file
        fieldnames: column order; defaults to the keys of the first row

    Raises:
        DataError: if the file cannot be written, naming the path
    """
    if fieldnames is None:
        fieldnames = list(rows[0].keys()) if rows else []
    if path is None or str(path) == "-":
        write_csv(rows, fieldnames, sys.stdout)
        return

    path = Path(path)
    buffer = io.StringIO()
    write_csv(rows, fieldnames, buffer)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(buffer.getvalue(), encoding="utf-8")
    except OSError as e:
        raise DataError(f"cannot write {path}: {e}")


def export_embeddings(x: np.ndarray, ids: Iterable[int], path: str | Path):
    """
    Write selected rows of `x` as `node_id,f0,f1,...`.

    An empty id list still writes the header.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ShapeError(f"embeddings must be a matrix, got shape {x.shape}")
    ids = np.asarray(list(ids), dtype=np.int64)
    if len(ids) and (ids.min() < 0 or ids.max() >= x.shape[0]):
        raise ShapeError(f"node ids must lie in [0, {x.shape[0]})")

    fieldnames = ["node_id"] + [f"f{j}" for j in range(x.shape[1])]
    rows = []
    for i in ids:
        row = {"node_id": int(i)}
        row.update({f"f{j}": float(v) for j, v in enumerate(x[i])})
        rows.append(row)
    export_csv(rows, path, fieldnames)


def read_embeddings(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """
    Read a file written by export_embeddings.

    Returns:
        (node ids, embedding matrix with one row per id)
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            reader = csv.reader(f)
            header = next(reader)
            body = [row for row in reader if row]
    except (OSError, StopIteration) as e:
        raise DataError(f"cannot read embeddings {path}: {e}")

    width = len(header) - 1
    if not body:
        return np.zeros(0, dtype=np.int64), np.zeros((0, width))
    try:
        ids = np.array([int(row[0]) for row in body], dtype=np.int64)
        values = np.array([[float(v) for v in row[1:]] for row in body], dtype=np.float64)
    except ValueError as e:
        raise DataError(f"{path}: malformed embedding row: {e}")
    return ids, values.reshape(len(body), width)
