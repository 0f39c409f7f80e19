"""Operator JSON files and deterministic output writers.

An operator file is ``{"d": int, "re": [[...]], "im": [[...]]}`` with
row-major real and imaginary parts; ``"im"`` may be omitted. Floats are
written with ``repr``, the shortest decimal that round-trips bit-exactly.
"""

import json
import os
import tempfile

import numpy as np

from .errors import NonHermitianInput, ParseError
from .linalg import as_hermitian


def _matrix_field(obj, key, d, source):
    rows = obj[key]
    if not isinstance(rows, list) or len(rows) != d:
        raise ParseError(f"{source}: field '{key}' must be a list of {d} rows")
    out = np.empty((d, d))
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise ParseError(f"{source}: field '{key}' row {i} must have {d} entries")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ParseError(f"{source}: field '{key}' entry [{i}][{j}] is not a number: {x!r}")
            out[i, j] = x
    return out


def operator_from_dict(obj, source="<operator>"):
    """Build and validate an operator from its JSON object."""
    if not isinstance(obj, dict):
        raise ParseError(f"{source}: top level must be a JSON object")
    for key in ("d", "re"):
        if key not in obj:
            raise ParseError(f"{source}: missing field '{key}'")
    d = obj["d"]
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ParseError(f"{source}: field 'd' must be a positive integer, got {d!r}")
    re = _matrix_field(obj, "re", d, source)
    if "im" in obj:
        H = re + 1j * _matrix_field(obj, "im", d, source)
    else:
        H = re
    try:
        return as_hermitian(H)
    except NonHermitianInput as exc:
        raise NonHermitianInput(exc.deviation, exc.tol) from None


def parse_operator_text(text, source="<operator>"):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return operator_from_dict(obj, source)


def parse_operator_file(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_operator_text(text, source=str(path))


def operator_to_dict(H):
    H = np.asarray(H)
    d = H.shape[0]
    obj = {"d": int(d), "re": [[float(x) for x in row] for row in H.real]}
    if np.iscomplexobj(H) and np.any(H.imag):
        obj["im"] = [[float(x) for x in row] for row in H.imag]
    return obj


def format_operator(H):
    return json.dumps(operator_to_dict(H)) + "\n"


def atomic_write(path, text):
    """Write ``text`` to ``path`` through a temporary file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_operator_file(path, H):
    atomic_write(path, format_operator(H))


def fmt(x):
    """Shortest round-trip decimal for a float, plain text for ints."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if x == 0.0:
        return "0.0"
    return repr(x)


def csv_text(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(x) for x in row))
    return "\n".join(lines) + "\n"
