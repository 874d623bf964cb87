"""Symbol interning, patterns, mixes and symbol substitution.

Every matrix the algorithms touch is reduced to a square array of positive
integer symbol ids.  Two substitution procedures exist:

* :func:`consistent_substitute` maps the tokens of several arrays jointly,
  assigning ids ``1..k`` in the sorted order of the distinct tokens.
* :func:`sym_sub` maps a single array of strings, giving off-diagonal and
  diagonal strings separate id ranges so the result is diagonally distinct.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from numbers import Number

import numpy as np

SYMBOL_DTYPE = np.int64


class DimensionError(ValueError):
    """Raised for non-square inputs or mismatched dimensions."""


def as_square(M, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(M) if not isinstance(M, np.ndarray) else M
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    return arr


def token_key(token):
    """Total-order sort key for a value token.

    Numbers sort before strings and compare by exact value; complex numbers
    by (real, imag).  Anything else orderable (tuples, canonical strings)
    sorts after strings among its own kind.
    """
    if isinstance(token, np.generic):
        token = token.item()
    if isinstance(token, bool):
        token = int(token)
    if isinstance(token, complex):
        if math.isnan(token.real) or math.isnan(token.imag):
            raise ValueError("NaN is not a valid value token")
        if token.imag == 0:
            return (0, token.real, 0.0)
        return (0, token.real, token.imag)
    if isinstance(token, (int, float, Fraction, Decimal)) or isinstance(token, Number):
        if isinstance(token, float) and math.isnan(token):
            raise ValueError("NaN is not a valid value token")
        return (0, token, 0)
    if isinstance(token, str):
        return (1, token)
    return (2, token)


def _numeric_kind(arr: np.ndarray) -> bool:
    return arr.dtype.kind in "biuf"


def substitute(*arrays) -> tuple[np.ndarray, ...]:
    """Jointly substitute ids ``1..k`` for the distinct tokens of all arrays.

    Ids follow the sorted order of the distinct tokens over the union of the
    arrays, so the assignment is reproducible and independent of where a
    token happens to appear first.
    """
    arrs = [np.asarray(a) if not isinstance(a, np.ndarray) else a for a in arrays]
    if all(_numeric_kind(a) for a in arrs):
        if any(a.dtype.kind == "f" and np.isnan(a).any() for a in arrs):
            raise ValueError("NaN is not a valid value token")
        flat = np.concatenate([a.ravel() for a in arrs]) if arrs else np.empty(0)
        _, inverse = np.unique(flat, return_inverse=True)
        ids = inverse.reshape(-1).astype(SYMBOL_DTYPE) + 1
    else:
        flat = [t for a in arrs for t in a.ravel().tolist()]
        keys = [token_key(t) for t in flat]
        order = sorted(set(keys))
        rank = {k: i + 1 for i, k in enumerate(order)}
        ids = np.fromiter((rank[k] for k in keys), dtype=SYMBOL_DTYPE, count=len(keys))
    out = []
    pos = 0
    for a in arrs:
        out.append(ids[pos:pos + a.size].reshape(a.shape))
        pos += a.size
    return tuple(out)


def consistent_substitute(A, B) -> tuple[np.ndarray, np.ndarray]:
    """Consistent symbol substitution of a pair of square arrays."""
    A = as_square(A, "A")
    B = as_square(B, "B")
    if A.shape != B.shape:
        raise DimensionError(f"dimension mismatch: {A.shape} vs {B.shape}")
    return substitute(A, B)


def sym_sub(S, mode: str = "plain") -> np.ndarray:
    """Permutation-independent substitution of a single string array.

    Distinct off-diagonal strings, in sorted order, get ``1..n1``; distinct
    diagonal strings get ``base+1..base+n2`` where ``base = n1`` in plain
    mode and ``base = n**2 * n1`` in ``"spd"`` mode (n is the array
    dimension), which makes the result strictly diagonally dominant.
    """
    S = as_square(S, "S")
    n = S.shape[0]
    if mode not in ("plain", "spd"):
        raise ValueError(f"unknown mode {mode!r}")
    diag_mask = np.eye(n, dtype=bool)
    off_vals = S[~diag_mask]
    diag_vals = S[diag_mask]
    if _numeric_kind(S):
        off_keys = [(0, v) for v in off_vals.tolist()]
        diag_keys = [(0, v) for v in diag_vals.tolist()]
    else:
        off_keys = [token_key(v) for v in off_vals.tolist()]
        diag_keys = [token_key(v) for v in diag_vals.tolist()]
    off_set = set(off_keys)
    diag_set = set(diag_keys)
    if off_set & diag_set:
        raise ValueError("a string appears both on and off the diagonal")
    off_rank = {k: i + 1 for i, k in enumerate(sorted(off_set))}
    n1 = len(off_rank)
    base = n1 if mode == "plain" else n * n * n1
    diag_rank = {k: base + i + 1 for i, k in enumerate(sorted(diag_set))}
    out = np.empty((n, n), dtype=SYMBOL_DTYPE)
    out[~diag_mask] = [off_rank[k] for k in off_keys]
    out[diag_mask] = [diag_rank[k] for k in diag_keys]
    return out


def is_diag_distinct(M) -> bool:
    M = as_square(M)
    n = M.shape[0]
    mask = np.eye(n, dtype=bool)
    return not (set(M[mask].tolist()) & set(M[~mask].tolist()))


def is_symmetric(M) -> bool:
    M = as_square(M)
    return bool(np.array_equal(M, M.T))


def count_symbols(M) -> int:
    return int(np.unique(np.asarray(M)).size)


# --- patterns ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Pattern:
    """Canonically ordered partition of the n*n locations of a matrix.

    ``cell_of[i, j]`` is the index of the cell holding location ``(i, j)``;
    cells are numbered by the row-major order of their first (representative)
    location, so two patterns are equal exactly when their ``cell_of``
    arrays are.
    """

    n: int
    cell_of: np.ndarray
    representatives: tuple[tuple[int, int], ...]

    @property
    def num_cells(self) -> int:
        return len(self.representatives)

    def cells(self) -> list[list[tuple[int, int]]]:
        out: list[list[tuple[int, int]]] = [[] for _ in self.representatives]
        for (i, j), c in np.ndenumerate(self.cell_of):
            out[c].append((i, j))
        return out

    def diagonal(self) -> np.ndarray:
        """Canonical labels of the diagonal locations, as a length-n vector."""
        return _first_occurrence_labels(np.diag(self.cell_of))

    def __eq__(self, other):
        if not isinstance(other, Pattern):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.cell_of, other.cell_of)

    def __hash__(self):
        return hash((self.n, self.cell_of.tobytes()))


def _first_occurrence_labels(values: np.ndarray) -> np.ndarray:
    """Relabel a 1-D array so labels appear in order of first occurrence."""
    _, first, inverse = np.unique(values, return_index=True, return_inverse=True)
    rank = np.empty(first.size, dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(first.size)
    return rank[inverse.reshape(-1)]


def pattern_of(M) -> Pattern:
    M = as_square(M)
    n = M.shape[0]
    if n == 0:
        return Pattern(0, np.zeros((0, 0), dtype=np.int64), ())
    if not _numeric_kind(M):
        (M,) = substitute(M)
    cell = _first_occurrence_labels(M.ravel())
    # cells are labelled by first occurrence, so this is already in cell order
    _, first = np.unique(cell, return_index=True)
    reps = tuple((int(k // n), int(k % n)) for k in first.tolist())
    return Pattern(n, cell.reshape(n, n), reps)


def _check_same_dim(P1: Pattern, P2: Pattern) -> None:
    if P1.n != P2.n:
        raise DimensionError(f"pattern dimension mismatch: {P1.n} vs {P2.n}")


def pattern_difference(P1: Pattern, P2: Pattern) -> np.ndarray:
    """0 where the representative locations assigned to (i, j) agree, else 1."""
    _check_same_dim(P1, P2)
    n = P1.n
    rep1 = np.array([i * n + j for i, j in P1.representatives], dtype=np.int64)
    rep2 = np.array([i * n + j for i, j in P2.representatives], dtype=np.int64)
    return (rep1[P1.cell_of] != rep2[P2.cell_of]).astype(np.int8)


def refines(P1: Pattern, P2: Pattern) -> bool:
    """True iff every cell of ``P1`` lies inside a single cell of ``P2``."""
    _check_same_dim(P1, P2)
    if P1.n == 0:
        return True
    image = np.full(P1.num_cells, -1, dtype=np.int64)
    c1 = P1.cell_of.ravel()
    c2 = P2.cell_of.ravel()
    image[c1] = c2
    return bool(np.array_equal(image[c1], c2))


# --- mixes ------------------------------------------------------------------


def _sorted_tuple(values) -> tuple:
    vals = list(values)
    try:
        return tuple(sorted(vals))
    except TypeError:
        return tuple(sorted(vals, key=token_key))


def diag_mix(M) -> tuple:
    M = as_square(M)
    return _sorted_tuple(np.diag(M).tolist())


def col_mix(M) -> tuple:
    M = as_square(M)
    return _sorted_tuple(_sorted_tuple(col) for col in M.T.tolist())


def row_mix(M) -> tuple:
    M = as_square(M)
    return _sorted_tuple(_sorted_tuple(row) for row in M.tolist())


def full_mix(M) -> tuple:
    M = as_square(M)
    return _sorted_tuple(M.ravel().tolist())
