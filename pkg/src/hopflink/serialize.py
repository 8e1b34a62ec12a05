"""Deterministic JSON and CSV output.

Floats are written with 17 significant digits so that identical inputs give
byte-identical files and every value round-trips exactly. Keys keep their
insertion order, which is fixed by the code that builds each record.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

import numpy as np


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    text = format(x, ".17g")
    # keep floats recognisable as floats after a round trip
    return text if any(ch in text for ch in ".en") else text + ".0"


def _plain(obj):
    """Convert numpy scalars/arrays, fractions and tuples to JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj, out: list, indent: int, level: int):
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            out.append(("," if i else "") + pad + json.dumps(k, ensure_ascii=False) + ": ")
            _emit(v, out, indent, level + 1)
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        # short numeric rows (points, matrix rows) stay on one line
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj) and len(obj) <= 16:
            out.append("[" + ", ".join(_scalar(v) for v in obj) + "]")
            return
        out.append("[")
        for i, v in enumerate(obj):
            out.append(("," if i else "") + pad)
            _emit(v, out, indent, level + 1)
        out.append(end + "]")
    else:
        out.append(_scalar(obj))


def _scalar(v) -> str:
    if isinstance(v, float):
        return format_float(v)
    return json.dumps(v, ensure_ascii=False)


def dumps_json(obj, indent: int = 2) -> str:
    out: list[str] = []
    _emit(_plain(obj), out, indent, 0)
    return "".join(out) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return format_float(float(v))
    return str(v)


def dumps_csv(rows, columns) -> str:
    """RFC-4180 CSV (CRLF line ends, minimal quoting) with a header row."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()
