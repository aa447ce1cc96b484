"""Reading and writing matrices, vectors and trajectory traces."""
from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path

import numpy as np

from .errors import ParseError


def _parse_float(text, line, column):
    try:
        v = float(text)
    except ValueError:
        raise ParseError(f"not a decimal number: {text!r}", line=line, column=column) from None
    if not np.isfinite(v):
        raise ParseError(f"non-finite value {text!r}", line=line, column=column)
    return v


def parse_matrix(text: str) -> np.ndarray:
    """Parse CSV (one row per line) or the JSON form ``{"rows", "cols", "data"}``."""
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty matrix input")
    if stripped.startswith("{"):
        return _parse_matrix_json(stripped)
    rows = []
    for lineno, line in enumerate(stripped.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = next(csv.reader([line]))
        row = [_parse_float(f.strip(), lineno, col) for col, f in enumerate(fields, start=1)]
        if rows and len(row) != len(rows[0]):
            raise ParseError(
                f"ragged row: expected {len(rows[0])} fields, found {len(row)}", line=lineno
            )
        rows.append(row)
    if not rows:
        raise ParseError("no matrix rows found")
    return np.array(rows, dtype=np.float64)


def _parse_matrix_json(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    if not isinstance(obj, dict) or "data" not in obj:
        raise ParseError('JSON matrix must be an object with a "data" field')
    data = obj["data"]
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ParseError('"data" must be a nonempty list of rows')
    width = len(data[0])
    for i, r in enumerate(data, start=1):
        if len(r) != width:
            raise ParseError(f"ragged row {i}: expected {width} entries, found {len(r)}")
    try:
        M = np.array(data, dtype=np.float64)
    except (TypeError, ValueError):
        raise ParseError("non-numeric entry in JSON matrix") from None
    if not np.all(np.isfinite(M)):
        raise ParseError("non-finite entry in JSON matrix")
    if obj.get("rows", M.shape[0]) != M.shape[0] or obj.get("cols", M.shape[1]) != M.shape[1]:
        raise ParseError(f'declared shape ({obj.get("rows")}, {obj.get("cols")}) does not match data {M.shape}')
    return M


def parse_vector(text: str) -> np.ndarray:
    """A single CSV line, or one decimal per line."""
    rows = []
    for lineno, line in enumerate(text.strip().splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = next(csv.reader([line]))
        rows.append([_parse_float(f.strip(), lineno, c) for c, f in enumerate(fields, start=1)])
    if not rows:
        raise ParseError("empty vector input")
    if len(rows) == 1:
        return np.array(rows[0], dtype=np.float64)
    if any(len(r) != 1 for r in rows):
        raise ParseError("vector must be one CSV line or one number per line")
    return np.array([r[0] for r in rows], dtype=np.float64)


def read_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def read_vector(path) -> np.ndarray:
    return parse_vector(Path(path).read_text())


def format_matrix_csv(A) -> str:
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    return "".join(",".join(repr(float(v)) for v in row) + "\n" for row in A)


def format_matrix_json(A) -> str:
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    return json.dumps({"rows": A.shape[0], "cols": A.shape[1], "data": A.tolist()})


def write_matrix(A, path, fmt="csv"):
    text = format_matrix_json(A) if fmt == "json" else format_matrix_csv(A)
    Path(path).write_text(text)


def file_digest(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def trace_to_csv(trace) -> str:
    """``j, x_1..x_n, s_minus, s_plus`` per step of a TrajectoryTrace."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    n = trace.states.shape[1]
    w.writerow(["j", *[f"x_{i}" for i in range(1, n + 1)], "s_minus", "s_plus"])
    for j, x in enumerate(trace.states):
        w.writerow([j, *[repr(float(v)) for v in x], trace.s_minus_trace[j], trace.s_plus_trace[j]])
    return buf.getvalue()
