"""Permutation recovery (Algorithm 2) with BPSAY as the only oracle.

Column by column, the search looks for a row ``j`` of the current ``A``
whose diagonal symbol matches ``B(1,1)``, moves it to the front, sandwiches
both matrices between their first column and first row, and asks BPSAY
whether the trailing principal submatrices are still p-similar.  The
first ``j`` that passes is committed and the problem shrinks by one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bpsay import BpsayConfig, check_psim
from .pcm import shift_and_translate
from .symbols import (
    DimensionError,
    as_square,
    consistent_substitute,
    is_diag_distinct,
    substitute,
)
from .symsqr import sym_mult


class CounterexampleError(RuntimeError):
    """BPSAY said p-similar but no consistent permutation could be built.

    ``payload`` carries the inputs and the search state for the report.
    """

    def __init__(self, message: str, payload: dict):
        super().__init__(message)
        self.payload = payload


@dataclass
class FindPermResult:
    psim: bool
    perm: np.ndarray
    verified: bool
    bpsay_calls: int
    notes: list[str] = field(default_factory=list)

    def to_json(self, one_based: bool = True) -> dict:
        offset = 1 if one_based else 0
        return {
            "psim": self.psim,
            "perm": [int(x) + offset for x in self.perm],
            "verified": self.verified,
            "bpsay_calls": self.bpsay_calls,
            "notes": list(self.notes),
        }


def exchange_ij(A, i: int, j: int) -> np.ndarray:
    """Swap rows i, j and columns i, j (0-based): ``P_ij A P_ij^T``."""
    A = as_square(np.asarray(A))
    n = A.shape[0]
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"indices ({i}, {j}) out of range for dimension {n}")
    p = np.arange(n)
    p[[i, j]] = p[[j, i]]
    return A[np.ix_(p, p)]


def apply_perm(M, p) -> np.ndarray:
    """``M(p, p)``: the symmetric permutation the search is verified against."""
    M = np.asarray(M)
    p = np.asarray(p)
    return M[np.ix_(p, p)]


def _sandwich(A: np.ndarray) -> np.ndarray:
    return sym_mult(A[:, 0], A, A[0, :])


def find_permutation(M1, M2, cfg: BpsayConfig | None = None) -> FindPermResult:
    """Find ``p`` with ``M1(p, p) == M2``, or report that none exists.

    Raises :class:`CounterexampleError` if the BPSAY gate accepts but the
    search dead-ends or the recovered permutation fails verification.
    """
    cfg = cfg or BpsayConfig()
    M1 = as_square(np.asarray(M1), "M1")
    M2 = as_square(np.asarray(M2), "M2")
    if M1.shape != M2.shape:
        raise DimensionError(f"dimension mismatch: {M1.shape} vs {M2.shape}")
    m = M1.shape[0]
    p = np.arange(m)
    calls = 1
    if not check_psim(M1, M2, cfg).psim:
        return FindPermResult(False, p, False, calls)
    notes: list[str] = []
    A, B = consistent_substitute(M1, M2)
    k = int(max(A.max(), B.max())) if m else 0
    beta = max(m * m, k)
    A = shift_and_translate(A, beta, 0)
    B = shift_and_translate(B, beta, 0)
    if not (is_diag_distinct(A) and is_diag_distinct(B)):
        # cannot happen after the shift above; kept as a guarded fallback
        notes.append("diagonal collided with off-diagonal after shift; re-colored")
        A = shift_and_translate(A, beta, 2)
        B = shift_and_translate(B, beta, 2)
    n = m
    for c in range(m - 1):
        DBD = _sandwich(B)
        committed = False
        for j in range(n):
            if A[j, j] != B[0, 0]:
                continue
            AJ1 = exchange_ij(A, 0, j)
            S, T = substitute(_sandwich(AJ1), DBD)
            S22, T22 = S[1:, 1:], T[1:, 1:]
            calls += 1
            if check_psim(S22, T22, cfg).psim:
                p[[c, c + j]] = p[[c + j, c]]
                A, B = S22, T22
                committed = True
                break
        if not committed:
            raise CounterexampleError(
                f"no candidate passed at column {c}",
                {"M1": M1.tolist(), "M2": M2.tolist(), "column": c, "perm": p.tolist()},
            )
        n -= 1
    verified = bool(np.array_equal(apply_perm(M1, p), M2))
    if not verified:
        raise CounterexampleError(
            "recovered permutation does not map M1 onto M2",
            {"M1": M1.tolist(), "M2": M2.tolist(), "perm": p.tolist()},
        )
    return FindPermResult(True, p, verified, calls, notes)
