"""Reading spaces, vectors and functions from JSON or CSV files."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .errors import MetricError, ParseError
from .freespace import FreeVector, LipFunction
from .metric import FiniteMetricSpace, validate_metric
from .rational import to_fraction


def read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except FileNotFoundError:
        raise FileNotFoundError(f"no such file: {path}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc.msg}", exc.lineno, exc.colno) from None


def space_from_json(data: dict, base=None) -> FiniteMetricSpace:
    try:
        labels = data["labels"]
        matrix = data["dist"]
    except (KeyError, TypeError):
        raise ParseError('space JSON needs "labels" and "dist"') from None
    if base is None:
        base = data.get("base", labels[0] if labels else None)
    return validate_metric(labels, str(base), matrix)


def space_from_csv(text: str, base=None) -> FiniteMetricSpace:
    """Header row of labels, then one matrix row per line.

    A leading label column is allowed when the header's first cell is empty.
    """
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty CSV", 1)
    header = [c.strip() for c in rows[0]]
    row_labels = header[0] == ""
    labels = header[1:] if row_labels else header
    matrix = []
    for lineno, row in enumerate(rows[1:], start=2):
        cells = row[1:] if row_labels else row
        if len(cells) != len(labels):
            raise ParseError(f"expected {len(labels)} entries, got {len(cells)}", lineno)
        out = []
        for col, cell in enumerate(cells, start=2 if row_labels else 1):
            try:
                out.append(to_fraction(cell))
            except ParseError:
                raise ParseError(f"cannot parse rational {cell!r}", lineno, col) from None
        matrix.append(out)
    if base is None:
        base = labels[0] if labels else None
    return validate_metric(labels, str(base), matrix)


def load_space(path, base=None) -> FiniteMetricSpace:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        try:
            text = path.read_text()
        except FileNotFoundError:
            raise FileNotFoundError(f"no such file: {path}") from None
        return space_from_csv(text, base)
    return space_from_json(read_json(path), base)


def vector_from_json(M: FiniteMetricSpace, data: dict):
    """``{"coeffs": {...}}`` gives a FreeVector, ``{"values": {...}}`` a LipFunction."""
    if "coeffs" in data:
        coeffs = {}
        for label, v in data["coeffs"].items():
            i = _index(M, label)
            if i == M.base:
                raise ParseError("the base point has no free coordinate; omit it")
            coeffs[i] = to_fraction(v)
        return FreeVector(coeffs)
    if "values" in data:
        vals = [to_fraction(0)] * M.n
        for label, v in data["values"].items():
            vals[_index(M, label)] = to_fraction(v)
        if vals[M.base] != 0:
            raise ParseError("a Lip0 function must vanish at the base point")
        return LipFunction(tuple(vals))
    raise ParseError('expected "coeffs" or "values"')


def _index(M: FiniteMetricSpace, label) -> int:
    try:
        return M.index(str(label))
    except KeyError as exc:
        raise MetricError(str(exc)) from None
