"""Symbolic squaring: canonical inner-product strings, SymSqr and SymMult.

Two routes compute the same thing:

* :func:`canonical_string` / :func:`sym_sqr` build explicit
  :class:`CanonicalString` objects location by location.  They are the
  readable definition and serve as the oracle for the fast path.
* :func:`refine` fuses squaring, lessor selection and consistent
  substitution over one or more matrices with numpy.  Each term ``(a, b)``
  is packed into one integer ``a*base + b``, which preserves the
  lexicographic term order, so rows of packed terms sort exactly like the
  canonical strings they encode.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .symbols import (
    SYMBOL_DTYPE,
    DimensionError,
    as_square,
    is_diag_distinct,
    is_symmetric,
    pattern_of,
    substitute,
)

Term = tuple[int, int]

# n*n*n packed terms above this many elements are processed in row chunks
_CHUNK_ELEMENTS = 4_000_000


@dataclass(frozen=True, order=True)
class CanonicalString:
    """Ordered term sequence of one symbolic inner product.

    ``diag_part`` holds the terms that involve a diagonal factor (the row
    vector's first), ``offdiag_part`` the remaining terms sorted.
    """

    diag_part: tuple[Term, ...]
    offdiag_part: tuple[Term, ...]

    def terms(self) -> tuple[Term, ...]:
        return self.diag_part + self.offdiag_part

    def __len__(self) -> int:
        return len(self.diag_part) + len(self.offdiag_part)


def canonical_string(row, col, i: int | None = None, j: int | None = None) -> CanonicalString:
    """Canonical string of the inner product ``row . col``.

    ``i`` is the position of the row vector's diagonal entry and ``j`` that
    of the column vector's.  With ``i == j`` there is one diagonal term;
    with both ``None`` every term is treated as off-diagonal.
    """
    row = list(np.asarray(row).tolist())
    col = list(np.asarray(col).tolist())
    if len(row) != len(col):
        raise DimensionError(f"length mismatch: {len(row)} vs {len(col)}")
    special = {k for k in (i, j) if k is not None}
    if i is not None and i == j:
        diag = ((row[i], col[i]),)
    else:
        diag = tuple((row[k], col[k]) for k in (i, j) if k is not None)
    rest = sorted((row[k], col[k]) for k in range(len(row)) if k not in special)
    return CanonicalString(diag, tuple(rest))


def _check_squarable(M) -> np.ndarray:
    M = as_square(M)
    if not is_symmetric(M):
        raise ValueError("symbolic squaring requires a symmetric matrix")
    if not is_diag_distinct(M):
        raise ValueError("symbolic squaring requires diagonal symbols distinct from off-diagonal")
    return M


def sym_sqr(M) -> np.ndarray:
    """Array of canonical strings of ``M x M``, symmetrized by the lessor."""
    M = _check_squarable(M)
    n = M.shape[0]
    raw = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            raw[i, j] = canonical_string(M[i, :], M[:, j], i, j)
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = min(raw[i, j], raw[j, i])
    return out


def sym_mult(D1, M, D2) -> np.ndarray:
    """Array of three-factor strings ``(D1[i,i], M[i,j], D2[j,j])``."""
    M = as_square(M)
    d1 = _diagonal_vector(D1)
    d2 = _diagonal_vector(D2)
    n = M.shape[0]
    if d1.size != n or d2.size != n:
        raise DimensionError("diagonal factors must conform to M")
    out = np.empty((n, n), dtype=object)
    d1l, d2l, Ml = d1.tolist(), d2.tolist(), M.tolist()
    for i in range(n):
        for j in range(n):
            out[i, j] = (d1l[i], Ml[i][j], d2l[j])
    return out


def _diagonal_vector(D) -> np.ndarray:
    D = np.asarray(D)
    if D.ndim == 1:
        return D
    D = as_square(D, "diagonal factor")
    if np.count_nonzero(D - np.diag(np.diag(D))):
        raise ValueError("diagonal factor has off-diagonal entries")
    return np.diag(D)


# --- fast fused path --------------------------------------------------------


def _packed_rows(M: np.ndarray, base: int, rows: slice) -> np.ndarray:
    """Packed canonical strings for output rows ``rows`` of ``M x M``.

    Returns an array of shape (r, n, n): one length-n packed string per
    location, diagonal terms first, remaining terms ascending.
    """
    n = M.shape[0]
    if n == 1:
        return (M * base + M).reshape(1, 1, 1)
    ii = np.arange(n)[rows]
    a_idx = np.arange(ii.size)
    jj = np.arange(n)
    # T[a, j, k] = (M[i, k], M[k, j]) packed, with i = ii[a]
    T = M[ii, None, :] * base + M.T[None, :, :]
    # zero the diagonal-involving slots k == i and k == j; zero sorts first
    T[a_idx[:, None], jj[None, :], ii[:, None]] = 0
    T[:, jj, jj] = 0
    T.sort(axis=2)
    # diagonal locations lost one slot only: [0, n-1 sorted terms]
    diag_rows = T[a_idx, ii, :].copy()
    diag = np.diag(M)
    mij = M[ii, :]
    T[:, :, 0] = diag[ii][:, None] * base + mij  # (D_ii, M_ij)
    T[:, :, 1] = mij * base + diag[None, :]  # (M_ij, D_jj)
    diag_rows[:, 0] = diag[ii] * base + diag[ii]  # (D_ii, D_ii)
    T[a_idx, ii, :] = diag_rows
    return T


def string_ranks(mats: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Rank of every location's canonical string, jointly over ``mats``.

    Equal strings get equal ranks and ranks follow the lexicographic string
    order.  No lessor selection is applied.
    """
    if not mats:
        return []
    n = mats[0].shape[0]
    for M in mats:
        if M.shape != (n, n):
            raise DimensionError("all matrices must share one dimension")
    # compress the joint alphabet so packed terms stay small
    flat = np.concatenate([M.ravel() for M in mats])
    alphabet, inv = np.unique(flat, return_inverse=True)
    inv = inv.reshape(-1).astype(np.int64) + 1
    base = alphabet.size + 1
    compact = [inv[t * n * n:(t + 1) * n * n].reshape(n, n) for t in range(len(mats))]
    if n == 0:
        return [np.zeros((0, 0), dtype=SYMBOL_DTYPE) for _ in mats]
    step = max(1, _CHUNK_ELEMENTS // (n * n))
    chunks = []
    for M in compact:
        for start in range(0, n, step):
            block = _packed_rows(M, base, slice(start, min(n, start + step)))
            chunks.append(block.reshape(-1, n))
    rows = np.concatenate(chunks, axis=0)
    ranks = _lexicographic_row_ranks(rows)
    return [ranks[t * n * n:(t + 1) * n * n].reshape(n, n) for t in range(len(mats))]


def _row_hashes(rows: np.ndarray) -> np.ndarray:
    """Two independent 64-bit multiplicative hashes per row (wrapping)."""
    rng = np.random.default_rng(0x5EED)
    weights = rng.integers(1, 2 ** 63, size=(rows.shape[1], 2), dtype=np.uint64) | np.uint64(1)
    return rows.astype(np.uint64) @ weights


def _lexicographic_row_ranks(rows: np.ndarray) -> np.ndarray:
    """Dense ranks of the rows of ``rows`` in lexicographic order.

    Rows are grouped by a 128-bit hash; every row is then compared with its
    group representative, so a hash collision can never merge two distinct
    strings (the exact but slower ``np.unique(axis=0)`` takes over if one
    is found).  Only the distinct representatives are sorted.
    """
    if rows.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    h = _row_hashes(rows)
    order = np.lexsort((h[:, 1], h[:, 0]))
    hs = h[order]
    new_group = np.ones(order.size, dtype=bool)
    new_group[1:] = np.any(hs[1:] != hs[:-1], axis=1)
    group_sorted = np.cumsum(new_group) - 1
    group = np.empty(order.size, dtype=np.int64)
    group[order] = group_sorted
    reps = order[new_group]
    if not np.array_equal(rows, rows[reps[group]]):
        _, inv = np.unique(rows, axis=0, return_inverse=True)
        return inv.reshape(-1)
    _, rep_rank = np.unique(rows[reps], axis=0, return_inverse=True)
    return rep_rank.reshape(-1)[group]


def refine(*mats) -> tuple[np.ndarray, ...]:
    """One round of SymSqr plus consistent substitution over all inputs.

    Equivalent to ``substitute(*(sym_sqr(M) for M in mats))`` but fast.
    """
    checked = [_check_squarable(M).astype(np.int64) for M in mats]
    ranks = string_ranks(checked)
    lessor = [np.minimum(R, R.T) for R in ranks]
    flat = np.concatenate([L.ravel() for L in lessor])
    _, ids = np.unique(flat, return_inverse=True)
    ids = ids.reshape(-1).astype(SYMBOL_DTYPE) + 1
    size = checked[0].size if checked else 0
    shape = checked[0].shape if checked else (0, 0)
    return tuple(ids[t * size:(t + 1) * size].reshape(shape) for t in range(len(mats)))


def stable_pattern(M, max_iters: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Iterate :func:`refine` on one matrix until its pattern is stable.

    Returns the stable symbol matrix and the distinct-symbol count after
    every squaring (the last entry repeats the stable count).  Raises
    ``RuntimeError`` if the bound, the matrix dimension by default, is
    exceeded.
    """
    (M,) = substitute(np.asarray(M))
    cap = M.shape[0] if max_iters is None else max_iters
    counts = []
    before = pattern_of(M)
    for _ in range(max(cap, 1)):
        (nxt,) = refine(M)
        counts.append(int(np.unique(nxt).size))
        after = pattern_of(nxt)
        if after == before:
            return nxt, counts
        M, before = nxt, after
    raise RuntimeError(f"pattern not stable after {cap} squarings")
