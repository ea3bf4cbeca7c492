"""JSON and CSV encodings for matrices, vectors and preserver specs.

Matrix JSON: ``{"n": N, "field": "real" | "complex", "rows": [[...], ...]}``
with complex entries as ``[re, im]``. Exact rationals may be given as
strings such as ``"1/3"``; a matrix whose entries are all integers or
such strings is loaded as a ``Fraction`` object array.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .preserver import PreserverSpec
from .strata import Partition
from .validation import is_rational

__all__ = [
    "parse_matrix",
    "load_matrix",
    "dump_matrix",
    "matrix_to_json",
    "matrix_to_csv",
    "parse_spec",
    "load_spec",
    "spec_to_json",
    "parse_number",
    "number_to_json",
    "parse_partition",
    "vector_to_json",
]


def parse_number(x):
    """Decode a scalar: ``[re, im]`` -> complex, ``"p/q"`` -> Fraction, ints kept exact."""
    if isinstance(x, bool):
        raise ValueError(f"boolean {x!r} is not a number")
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError(f"complex entries must be [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, str):
        s = x.strip()
        try:
            return Fraction(s) if "." not in s and "e" not in s.lower() else float(s)
        except ValueError:
            raise ValueError(f"cannot parse number {x!r}") from None
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        return x
    raise ValueError(f"cannot parse number {x!r}")


def number_to_json(x):
    if isinstance(x, complex) or isinstance(x, np.complexfloating):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    if is_rational(x):
        x = Fraction(x)
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return float(x)


def _rows_to_array(rows) -> np.ndarray:
    vals = [[parse_number(x) for x in row] for row in rows]
    flat = [v for row in vals for v in row]
    if flat and all(is_rational(v) for v in flat):
        return np.array([[Fraction(v) for v in row] for row in vals], dtype=object)
    if any(isinstance(v, complex) for v in flat):
        return np.array(vals, dtype=complex)
    return np.array([[float(v) for v in row] for row in vals], dtype=float)


def parse_matrix(payload) -> np.ndarray:
    if not isinstance(payload, dict) or "rows" not in payload:
        raise ValueError('matrix JSON must be an object with a "rows" field')
    rows = payload["rows"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValueError('"rows" must be a non-empty list of lists')
    n = payload.get("n", len(rows))
    if n != len(rows) or any(len(r) != n for r in rows):
        raise ValueError(f"matrix is not {n}x{n}")
    field = payload.get("field", "real")
    if field not in ("real", "complex"):
        raise ValueError(f'field must be "real" or "complex", got {field!r}')
    arr = _rows_to_array(rows)
    if field == "real" and np.iscomplexobj(arr):
        raise ValueError('complex entries in a matrix with field "real"')
    return arr


def _parse_csv(text: str) -> np.ndarray:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValueError("empty CSV matrix")
    arr = _rows_to_array([[c.strip() for c in r] for r in rows])
    if arr.shape[0] != arr.shape[1] if arr.ndim == 2 else True:
        raise ValueError("CSV matrix is not square")
    return arr


def load_matrix(path) -> np.ndarray:
    """Read a matrix from a ``.json`` or ``.csv`` file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".csv":
        return _parse_csv(text)
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed JSON ({exc})") from exc
    return parse_matrix(payload)


def matrix_to_json(A) -> dict:
    arr = np.asarray(A)
    complex_field = np.iscomplexobj(arr) or (arr.dtype == object and any(isinstance(x, complex) for x in arr.ravel()))
    return {
        "n": int(arr.shape[0]),
        "field": "complex" if complex_field else "real",
        "rows": [[number_to_json(x) for x in row] for row in arr.tolist()],
    }


def matrix_to_csv(A) -> str:
    arr = np.asarray(A)
    if np.iscomplexobj(arr):
        raise ValueError("CSV output supports real matrices only")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in arr.tolist():
        writer.writerow([repr(float(x)) if not is_rational(x) else str(x) for x in row])
    return buf.getvalue()


def dump_matrix(A, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        path.write_text(matrix_to_csv(A), encoding="utf-8")
    else:
        path.write_text(json.dumps(matrix_to_json(A), sort_keys=True), encoding="utf-8")


def vector_to_json(u) -> list:
    return [number_to_json(x) for x in np.asarray(u).tolist()]


def parse_spec(payload) -> PreserverSpec:
    """Build a spec from ``{"c", "n", "M", "cprime", "rho", "testset"}``."""
    if not isinstance(payload, dict):
        raise ValueError("spec JSON must be an object")
    missing = [k for k in ("c", "n", "M") if k not in payload]
    if missing:
        raise ValueError(f"spec JSON is missing {missing}")
    return PreserverSpec(
        coeffs=tuple(parse_number(x) for x in payload["c"]),
        exponents=tuple(parse_number(x) for x in payload["n"]),
        M=parse_number(payload["M"]),
        cprime=parse_number(payload.get("cprime", 0)),
        testset=payload.get("testset", "FullClosedRealPowers"),
        rho=parse_number(payload.get("rho", 1)),
    )


def load_spec(path) -> PreserverSpec:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed JSON ({exc})") from exc
    return parse_spec(payload)


def spec_to_json(spec: PreserverSpec) -> dict:
    return {
        "c": [number_to_json(x) for x in spec.coeffs],
        "n": [number_to_json(x) for x in spec.exponents],
        "M": number_to_json(spec.M),
        "cprime": number_to_json(spec.cprime),
        "rho": number_to_json(spec.rho),
        "testset": spec.testset.value,
    }


def parse_partition(payload, N: int | None = None) -> Partition:
    """Accept ``{"blocks": [[1, 2], [3]]}`` or a bare list of 1-based blocks."""
    blocks = payload.get("blocks") if isinstance(payload, dict) else payload
    if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
        raise ValueError("partition must be a list of 1-based index lists")
    pi = Partition.from_blocks(blocks, one_based=True)
    if N is not None and pi.N != N:
        raise ValueError(f"partition covers {pi.N} indices, expected {N}")
    return pi
