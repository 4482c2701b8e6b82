"""Matrix files: JSON ``{"rows", "cols", "data": [[re, im], ...]}`` or CSV of ``re+imj`` tokens."""

import csv
import io
import json
from pathlib import Path

import numpy as np

from .errors import ParseError


def _position(text, offset):
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def parse_json(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(obj, dict) or not {"rows", "cols", "data"} <= obj.keys():
        raise ParseError("matrix JSON needs keys rows, cols and data", 1, 1)
    rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise ParseError("rows and cols must be positive integers", 1, 1)
    if not isinstance(data, list) or len(data) != rows * cols:
        raise ParseError(f"data must hold rows*cols = {rows * cols} entries", 1, 1)
    values = []
    for i, pair in enumerate(data):
        ok = isinstance(pair, list) and len(pair) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair
        )
        if not ok:
            line, column = _entry_position(text, i)
            raise ParseError(f"entry {i} is not a [re, im] pair", line, column)
        values.append(complex(pair[0], pair[1]))
    return np.array(values, dtype=np.complex128).reshape(rows, cols)


def _entry_position(text, index):
    # Best effort: locate the index-th inner list after "data".
    start = text.find('"data"')
    depth, count = 0, -1
    for pos in range(max(start, 0), len(text)):
        ch = text[pos]
        if ch == "[":
            depth += 1
            if depth == 2:
                count += 1
                if count == index:
                    return _position(text, pos)
        elif ch == "]":
            depth -= 1
    return None, None


def parse_csv(text):
    rows = []
    for lineno, record in enumerate(csv.reader(io.StringIO(text)), 1):
        if not record or all(not tok.strip() for tok in record):
            continue
        row = []
        column = 1
        for tok in record:
            try:
                row.append(complex(tok.strip().replace(" ", "")))
            except ValueError:
                raise ParseError(f"bad complex token {tok.strip()!r}", lineno, column) from None
            column += len(tok) + 1
        if rows and len(row) != len(rows[0]):
            raise ParseError(f"row has {len(row)} entries, expected {len(rows[0])}", lineno, 1)
        rows.append(row)
    if not rows:
        raise ParseError("empty matrix file", 1, 1)
    return np.array(rows, dtype=np.complex128)


def parse_matrix(text):
    """Parse matrix text, choosing JSON when it starts with ``{``."""
    if text.lstrip().startswith("{"):
        return parse_json(text)
    return parse_csv(text)


def read_matrix(path):
    return parse_matrix(Path(path).read_text())


def to_json(A):
    A = np.asarray(A, dtype=np.complex128)
    rows, cols = A.shape
    data = [[float(z.real), float(z.imag)] for z in A.ravel()]
    return json.dumps({"rows": rows, "cols": cols, "data": data})


def _token(z):
    z = complex(z)
    return f"{z.real!r}{z.imag:+}j" if z.imag else repr(z.real)


def to_csv(A):
    A = np.asarray(A, dtype=np.complex128)
    return "".join(",".join(_token(z) for z in row) + "\n" for row in A)
