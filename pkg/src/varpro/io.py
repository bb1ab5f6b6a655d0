"""Plain-text file formats: dataset CSV, curve CSV, parallel-coordinates CSV, fit report JSON.

Floats are written with ``repr``, the shortest string that round-trips a
64-bit float exactly, so reading and rewriting a canonical file reproduces
it byte for byte.
"""
import csv
import json
import math

import numpy as np

from .exceptions import VarproError
from .projection import Dataset


class DataFormatError(VarproError, ValueError):
    """A data file is malformed."""


def _fmt(value):
    return repr(float(value))


def _write_rows(path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def dataset_to_text(data):
    rows = [f"{_fmt(x)},{_fmt(y)},{_fmt(dy)}" for x, y, dy in zip(data.x, data.y, data.dy)]
    return "x,y,dy\n" + "".join(r + "\n" for r in rows)


def write_dataset(path, data):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dataset_to_text(data))


def read_dataset(path):
    """Read an ``x,y,dy`` CSV file into a :class:`Dataset`."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["x", "y", "dy"]:
            raise DataFormatError(f"{path}: expected header 'x,y,dy', got {header!r}")
        points = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise DataFormatError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            try:
                points.append(tuple(float(c) for c in row))
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: {exc}") from None
    if not points:
        raise DataFormatError(f"{path}: no data rows")
    try:
        return Dataset.from_points(points)
    except ValueError as exc:
        raise DataFormatError(f"{path}: {exc}") from None


def write_curve(path, xs, ys):
    _write_rows(path, ["x", "y_fit"], ([_fmt(x), _fmt(y)] for x, y in zip(xs, ys)))


def write_parallel_coordinates(path, table):
    """Write rows ``(experiment, b0, b1, ...)`` as produced by the ensemble export."""
    table = np.asarray(table)
    n_b = table.shape[1] - 1
    header = ["experiment"] + [f"b{i}" for i in range(n_b)]
    rows = ([str(int(r[0]))] + [_fmt(v) for v in r[1:]] for r in table)
    _write_rows(path, header, rows)


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_json(path, document):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(document), fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
