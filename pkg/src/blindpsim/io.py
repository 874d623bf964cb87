"""Reading and writing matrices and graphs.

Supported formats:

``dimacs``
    ``c`` comments, one ``p edge N M`` header, ``e u v`` edge lines.
``matrix-market``
    Coordinate or array Matrix Market; the ``%%MatrixMarket`` banner is
    optional (a bare ``rows cols [nnz]`` size line is accepted).
``edge-list``
    ``u v [value]`` per line; ``#`` comments; an optional ``# vertices: N``
    directive fixes the dimension.
``dense-csv``
    One matrix row per line, comma separated.

Vertex and row indices are 1-based in files and 0-based in memory; the
conversion happens only in this module.  Numeric fields become ``int`` when
they are integer literals and ``Decimal`` otherwise, so equality is exact.
"""

from __future__ import annotations

import csv
import io as _io
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

from .symbols import DimensionError

FORMATS = ("matrix-market", "dimacs", "edge-list", "dense-csv")
_EXTENSIONS = {
    ".mtx": "matrix-market",
    ".mm": "matrix-market",
    ".dimacs": "dimacs",
    ".dim": "dimacs",
    ".col": "dimacs",
    ".edges": "edge-list",
    ".el": "edge-list",
    ".csv": "dense-csv",
}


class InputFormatError(ValueError):
    """Malformed or inconsistent input file."""


@dataclass
class InputDocument:
    format: str
    matrix: np.ndarray
    provenance: dict = field(default_factory=dict)


def parse_token(text: str):
    """Exact value token for one field: int, Decimal, or the stripped string."""
    s = text.strip()
    try:
        return int(s)
    except ValueError:
        pass
    try:
        d = Decimal(s)
    except InvalidOperation:
        return s
    if d.is_nan():
        raise InputFormatError(f"NaN is not a valid value token: {text!r}")
    return d


def _as_array(rows) -> np.ndarray:
    flat = [x for row in rows for x in row]
    if all(isinstance(x, int) for x in flat):
        return np.array(rows, dtype=np.int64).reshape(len(rows), len(rows))
    out = np.empty((len(rows), len(rows)), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            out[i, j] = x
    return out


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        yield lineno, raw.strip()


def _vertex(text: str, n: int, lineno: int) -> int:
    try:
        v = int(text)
    except ValueError:
        raise InputFormatError(f"line {lineno}: vertex id {text!r} is not an integer") from None
    if not 1 <= v <= n:
        raise InputFormatError(f"line {lineno}: vertex id {v} outside 1..{n}")
    return v - 1


def parse_dimacs(text: str) -> np.ndarray:
    n = edges_declared = None
    A = None
    seen = set()
    for lineno, line in _lines(text):
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if A is not None:
                raise InputFormatError(f"line {lineno}: second problem line")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise InputFormatError(f"line {lineno}: expected 'p edge N M'")
            try:
                n, edges_declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise InputFormatError(f"line {lineno}: malformed header") from None
            if n < 0 or edges_declared < 0:
                raise InputFormatError(f"line {lineno}: negative size in header")
            A = np.zeros((n, n), dtype=np.int64)
        elif parts[0] == "e":
            if A is None:
                raise InputFormatError(f"line {lineno}: edge before 'p' line")
            if len(parts) != 3:
                raise InputFormatError(f"line {lineno}: expected 'e u v'")
            u, v = _vertex(parts[1], n, lineno), _vertex(parts[2], n, lineno)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InputFormatError(f"line {lineno}: duplicate edge {u + 1}-{v + 1}")
            seen.add(key)
            A[u, v] = A[v, u] = 1
        else:
            raise InputFormatError(f"line {lineno}: unknown line type {parts[0]!r}")
    if A is None:
        raise InputFormatError("missing 'p edge N M' line")
    if len(seen) != edges_declared:
        raise InputFormatError(f"header declares {edges_declared} edges, file has {len(seen)}")
    return A


def parse_matrix_market(text: str) -> np.ndarray:
    lines = [(k, ln) for k, ln in _lines(text)]
    layout, field_kind, symmetry = "coordinate", "real", "general"
    body = []
    for lineno, line in lines:
        if line.startswith("%%MatrixMarket"):
            parts = line.split()
            if len(parts) != 5 or parts[1].lower() != "matrix":
                raise InputFormatError(f"line {lineno}: malformed banner")
            layout, field_kind, symmetry = (x.lower() for x in parts[2:])
            if layout not in ("coordinate", "array"):
                raise InputFormatError(f"line {lineno}: unsupported layout {layout!r}")
            if symmetry not in ("general", "symmetric"):
                raise InputFormatError(f"line {lineno}: unsupported symmetry {symmetry!r}")
            continue
        if not line or line.startswith("%"):
            continue
        body.append((lineno, line.split()))
    if not body:
        raise InputFormatError("missing size line")
    size_lineno, size = body[0]
    try:
        dims = [int(x) for x in size]
    except ValueError:
        raise InputFormatError(f"line {size_lineno}: malformed size line") from None
    if layout == "array":
        if len(dims) != 2:
            raise InputFormatError(f"line {size_lineno}: array size line needs 'rows cols'")
        rows, cols = dims
    else:
        if len(dims) != 3:
            raise InputFormatError(f"line {size_lineno}: coordinate size line needs 'rows cols nnz'")
        rows, cols, nnz = dims
    if rows != cols:
        raise DimensionError(f"matrix must be square, got {rows}x{cols}")
    n = rows
    grid = [[0] * n for _ in range(n)]
    entries = body[1:]
    if layout == "array":
        values = [parse_token(x) for _, parts in entries for x in parts]
        expected = n * (n + 1) // 2 if symmetry == "symmetric" else n * n
        if len(values) != expected:
            raise InputFormatError(f"array body has {len(values)} values, expected {expected}")
        it = iter(values)
        for j in range(n):
            for i in range(j if symmetry == "symmetric" else 0, n):
                grid[i][j] = next(it)
                if symmetry == "symmetric":
                    grid[j][i] = grid[i][j]
        return _as_array(grid)
    if len(entries) != nnz:
        raise InputFormatError(f"size line declares {nnz} entries, file has {len(entries)}")
    seen = set()
    for lineno, parts in entries:
        want = 2 if field_kind == "pattern" else 3
        if len(parts) != want:
            raise InputFormatError(f"line {lineno}: expected {want} fields")
        i, j = _vertex(parts[0], n, lineno), _vertex(parts[1], n, lineno)
        if (i, j) in seen:
            raise InputFormatError(f"line {lineno}: duplicate entry ({i + 1}, {j + 1})")
        seen.add((i, j))
        value = 1 if field_kind == "pattern" else parse_token(parts[2])
        grid[i][j] = value
        if symmetry == "symmetric":
            grid[j][i] = value
    return _as_array(grid)


def parse_edge_list(text: str) -> np.ndarray:
    n = None
    edges = []
    for lineno, line in _lines(text):
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("vertices:"):
                try:
                    n = int(body.split(":", 1)[1])
                except ValueError:
                    raise InputFormatError(f"line {lineno}: malformed vertices directive") from None
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise InputFormatError(f"line {lineno}: expected 'u v [value]'")
        edges.append((lineno, parts))
    if n is None:
        try:
            n = max((max(int(p[0]), int(p[1])) for _, p in edges), default=0)
        except ValueError:
            raise InputFormatError("vertex ids must be integers") from None
    grid = [[0] * n for _ in range(n)]
    seen = set()
    for lineno, parts in edges:
        u, v = _vertex(parts[0], n, lineno), _vertex(parts[1], n, lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InputFormatError(f"line {lineno}: duplicate edge {u + 1}-{v + 1}")
        seen.add(key)
        value = parse_token(parts[2]) if len(parts) == 3 else 1
        grid[u][v] = grid[v][u] = value
    return _as_array(grid)


def parse_dense_csv(text: str) -> np.ndarray:
    rows = [row for row in csv.reader(_io.StringIO(text)) if row and any(c.strip() for c in row)]
    n = len(rows)
    for k, row in enumerate(rows, start=1):
        if len(row) != n:
            raise DimensionError(f"row {k} has {len(row)} fields; matrix must be {n}x{n}")
    return _as_array([[parse_token(c) for c in row] for row in rows])


_PARSERS = {
    "dimacs": parse_dimacs,
    "matrix-market": parse_matrix_market,
    "edge-list": parse_edge_list,
    "dense-csv": parse_dense_csv,
}


def detect_format(path: Path, text: str) -> str:
    ext = _EXTENSIONS.get(path.suffix.lower())
    if ext:
        return ext
    for _, line in _lines(text):
        if not line:
            continue
        if line.startswith("%%MatrixMarket") or line.startswith("%"):
            return "matrix-market"
        if line.startswith(("c ", "p ")) or line in ("c", "p"):
            return "dimacs"
        if "," in line:
            return "dense-csv"
        return "edge-list"
    raise InputFormatError(f"{path}: empty file")


def parse_text(text: str, fmt: str) -> np.ndarray:
    if fmt not in _PARSERS:
        raise InputFormatError(f"unknown format {fmt!r}; choose from {FORMATS}")
    return _PARSERS[fmt](text)


def parse_input(path, format_hint: str | None = None) -> InputDocument:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    fmt = format_hint or detect_format(path, text)
    matrix = parse_text(text, fmt)
    return InputDocument(fmt, matrix, {"path": str(path), "bytes": len(text.encode("utf-8"))})


# --- writers ----------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, np.generic):
        x = x.item()
    return str(x)


def format_dimacs(A) -> str:
    A = np.asarray(A)
    if not np.array_equal(A, A.T) or not set(np.unique(A).tolist()) <= {0, 1}:
        raise ValueError("DIMACS output needs a symmetric 0/1 matrix")
    if np.any(np.diag(A)):
        raise ValueError("DIMACS output does not encode self-loops")
    edges = np.argwhere(np.triu(A, 1))
    lines = [f"p edge {A.shape[0]} {len(edges)}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in edges]
    return "\n".join(lines) + "\n"


def format_matrix_market(M) -> str:
    M = np.asarray(M)
    n = M.shape[0]
    lines = ["%%MatrixMarket matrix coordinate real general", f"{n} {n} {n * n}"]
    for i in range(n):
        for j in range(n):
            lines.append(f"{i + 1} {j + 1} {_fmt(M[i, j])}")
    return "\n".join(lines) + "\n"


def format_edge_list(A) -> str:
    A = np.asarray(A)
    if not np.array_equal(A, A.T):
        raise ValueError("edge-list output needs a symmetric matrix")
    lines = [f"# vertices: {A.shape[0]}"]
    for u, v in zip(*np.nonzero(np.triu(A != 0))):
        lines.append(f"{u + 1} {v + 1} {_fmt(A[u, v])}")
    return "\n".join(lines) + "\n"


def format_dense_csv(M) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(M).tolist():
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


_WRITERS = {
    "dimacs": format_dimacs,
    "matrix-market": format_matrix_market,
    "edge-list": format_edge_list,
    "dense-csv": format_dense_csv,
}


def write_matrix(M, path, fmt: str | None = None) -> Path:
    path = Path(path)
    fmt = fmt or _EXTENSIONS.get(path.suffix.lower(), "dense-csv")
    if fmt not in _WRITERS:
        raise InputFormatError(f"unknown format {fmt!r}")
    path.write_text(_WRITERS[fmt](M), encoding="utf-8")
    return path
