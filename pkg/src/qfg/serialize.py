"""JSON encodings shared across the package.

Matrices are encoded row-major as nested arrays of 2-element [re, im] pairs:
``[[[re, im], ...], ...]``. Complex scalars are ``[re, im]``.

``dumps_canonical`` renders JSON with a fixed field order (dict insertion
order) and floats printed with 12 significant digits, so identical inputs
produce byte-identical output.
"""

from __future__ import annotations

import numpy as np

from .errors import ParseError


def complex_to_json(value: complex) -> list[float]:
    return [float(value.real), float(value.imag)]


def complex_from_json(data, path: str = "value") -> complex:
    if (
        not isinstance(data, (list, tuple))
        or len(data) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in data)
    ):
        raise ParseError(f"{path}: expected a [re, im] pair, got {data!r}")
    return complex(float(data[0]), float(data[1]))


def matrix_to_json(matrix) -> list:
    m = np.asarray(matrix, dtype=complex)
    return [[complex_to_json(complex(entry)) for entry in row] for row in m]


def matrix_from_json(data, path: str = "matrix") -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise ParseError(f"{path}: expected a non-empty nested array")
    dim = len(data)
    out = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"{path}[{i}]: expected a row of length {dim}")
        for j, entry in enumerate(row):
            out[i, j] = complex_from_json(entry, f"{path}[{i}][{j}]")
    return out


def format_float(x: float) -> str:
    x = float(x)
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    if x == 0.0:
        return "0"
    return f"{x:.12g}"


def dumps_canonical(obj) -> str:
    """Serialize to JSON with deterministic float formatting and field order."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, dict):
        items = ", ".join(f"{dumps_canonical(str(k))}: {dumps_canonical(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps_canonical(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
