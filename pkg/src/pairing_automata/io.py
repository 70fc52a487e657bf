"""Reading and writing matrices in the text and JSON file formats.

Text format::

    # comment lines start with '#'
    3 4
    1 2 3 4
    2 5 6 1
    5 4 3 6

JSON accepts ``{"rows": n, "cols": m, "entries": [[...], ...]}`` or a bare
list of rows.  Parsing only checks syntax and the declared shape; whether
the entries form a pairing is left to :func:`validate_pairing`.
"""
from __future__ import annotations

import json
from pathlib import Path

from .matrix import PairingMatrix


class MatrixParseError(ValueError):
    """The input is not a matrix in any supported format."""


def _int_row(tokens, where):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise MatrixParseError(f"{where}: non-integer entry") from None


def parse_matrix_text(text: str) -> list[list[int]]:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise MatrixParseError("empty input")
    header = _int_row(lines[0].split(), "header")
    if len(header) != 2 or min(header) < 1:
        raise MatrixParseError("header must be two positive integers 'n m'")
    n, m = header
    body = lines[1:]
    if len(body) != n:
        raise MatrixParseError(f"header declares {n} rows, found {len(body)}")
    rows = []
    for k, line in enumerate(body, start=1):
        row = _int_row(line.split(), f"row {k}")
        if len(row) != m:
            raise MatrixParseError(f"row {k} has {len(row)} entries, header declares {m}")
        rows.append(row)
    return rows


def parse_matrix_json(data) -> list[list[int]]:
    if isinstance(data, dict):
        try:
            n, m, rows = data["rows"], data["cols"], data["entries"]
        except KeyError as exc:
            raise MatrixParseError(f"missing key {exc.args[0]!r}") from None
    else:
        rows, n, m = data, None, None
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise MatrixParseError("entries must be a list of rows")
    if not all(isinstance(v, int) and not isinstance(v, bool) for r in rows for v in r):
        raise MatrixParseError("entries must be integers")
    if n is not None and (len(rows) != n or any(len(r) != m for r in rows)):
        raise MatrixParseError(f"entries do not match the declared shape {n}x{m}")
    return [list(r) for r in rows]


def parse_matrix(text: str) -> list[list[int]]:
    """Parse either format; JSON is tried when the input starts with ``{`` or ``[``."""
    stripped = text.lstrip()
    if stripped.startswith(("{", "[")):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise MatrixParseError(f"invalid JSON: {exc.msg}") from None
        return parse_matrix_json(data)
    return parse_matrix_text(text)


def read_matrix(path: str | Path) -> list[list[int]]:
    """Read and parse a matrix file; ``OSError`` propagates."""
    return parse_matrix(Path(path).read_text())


def format_matrix_text(C: PairingMatrix) -> str:
    lines = [f"{C.n_rows} {C.n_cols}"]
    lines += [" ".join(str(v) for v in row) for row in C.entries]
    return "\n".join(lines) + "\n"


def matrix_to_json(C: PairingMatrix) -> dict:
    return {"rows": C.n_rows, "cols": C.n_cols, "entries": C.tolist()}
