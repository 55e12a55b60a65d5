"""Matrix files: JSON objects and plain CSV.

JSON layout::

    {"n_rows": 2, "n_cols": 2, "data": [0.9, 0.2, 0.1, 0.8],
     "convention": "column-stochastic"}

``data`` is row-major.  CSV files hold one matrix row per line.  Floats are
written with 17 significant digits so every binary64 value survives a
round trip.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

CONVENTION = "column-stochastic"


class MatrixFileError(ValueError):
    """Malformed matrix file; the message names the offending row/column."""


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=float)
    return {
        "n_rows": int(m.shape[0]),
        "n_cols": int(m.shape[1]),
        "data": [float(v) for v in m.reshape(-1)],
        "convention": CONVENTION,
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise MatrixFileError("matrix JSON must be an object")
    missing = [k for k in ("n_rows", "n_cols", "data") if k not in obj]
    if missing:
        raise MatrixFileError(f"matrix JSON lacks field(s) {', '.join(missing)}")
    conv = obj.get("convention", CONVENTION)
    if conv != CONVENTION:
        raise MatrixFileError(f"unsupported convention {conv!r}, expected {CONVENTION!r}")
    r, c = int(obj["n_rows"]), int(obj["n_cols"])
    data = obj["data"]
    if r < 1 or c < 1 or len(data) != r * c:
        raise MatrixFileError(f"data has {len(data)} entries, expected {r}x{c}")
    out = np.empty(r * c)
    for k, v in enumerate(data):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise MatrixFileError(f"row {k // c}, column {k % c}: not a number: {v!r}")
        out[k] = v
    return out.reshape(r, c)


def loads_csv(text: str) -> np.ndarray:
    rows = []
    for i, raw in enumerate(csv.reader(io.StringIO(text))):
        if not raw or all(not cell.strip() for cell in raw):
            continue
        row = []
        for j, cell in enumerate(raw):
            try:
                row.append(float(cell))
            except ValueError:
                raise MatrixFileError(f"row {i}, column {j}: cannot parse {cell.strip()!r}") from None
        if rows and len(row) != len(rows[0]):
            raise MatrixFileError(f"row {i} has {len(row)} columns, expected {len(rows[0])}")
        rows.append(row)
    if not rows:
        raise MatrixFileError("empty CSV matrix")
    return np.array(rows, dtype=float)


def dumps_csv(m) -> str:
    m = np.asarray(m, dtype=float)
    return "".join(",".join(format(v, ".17g") for v in row) + "\n" for row in m)


def dumps_json(m) -> str:
    return json.dumps(matrix_to_json(m)) + "\n"


def detect_format(path, text: str | None = None) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in (".json", ".csv"):
        return suffix[1:]
    if text is not None and text.lstrip().startswith("{"):
        return "json"
    return "csv"


def loads(text: str, fmt: str) -> np.ndarray:
    if fmt == "json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatrixFileError(f"invalid JSON: {exc}") from None
        return matrix_from_json(obj)
    return loads_csv(text)


def dumps(m, fmt: str) -> str:
    return dumps_json(m) if fmt == "json" else dumps_csv(m)


def read_matrix(path):
    """Read a matrix file; returns ``(matrix, format)``."""
    text = Path(path).read_text()
    fmt = detect_format(path, text)
    return loads(text, fmt), fmt


def write_matrix(path, m, fmt: str | None = None) -> None:
    fmt = fmt or detect_format(path)
    Path(path).write_text(dumps(m, fmt))
