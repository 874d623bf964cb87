"""Color matrices and permutation constraint matrices (PCMs).

A PCM is the vertex-colored adjacency matrix of an edge-weighted m x m
rook's graph: column edges carry weight 1, row edges weight 2, and the
vertices (placed on the diagonal in column-major order) carry the colors
of the input's color matrix.  The PCG itself is never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symbols import SYMBOL_DTYPE, DimensionError, as_square, is_diag_distinct

COLUMN_EDGE_WEIGHT = 1
ROW_EDGE_WEIGHT = 2
DIRECT_SUM_FILL = 3


@dataclass(frozen=True)
class ColorMatrix:
    entries: np.ndarray
    beta: int
    gamma: int

    @property
    def m(self) -> int:
        return self.entries.shape[0]


def shift_and_translate(M, beta: int, gamma: int) -> np.ndarray:
    """Return ``M + beta*I + gamma*J``."""
    M = as_square(M)
    if beta < 0 or gamma < 0:
        raise ValueError("beta and gamma must be non-negative")
    out = M.astype(SYMBOL_DTYPE) + gamma
    out[np.diag_indices_from(out)] += beta
    return out


def color_matrix(M, beta: int | None = None) -> ColorMatrix:
    """Color matrix ``M + m^2 I + 2J`` of a substituted symbol matrix.

    ``M`` must hold symbols in ``1..k``.  With the default shift the symbols
    must not exceed ``m^2``; a larger ``beta`` may be passed when the symbol
    alphabet is bigger (any shift preserves p-similarity).
    """
    M = as_square(M)
    m = M.shape[0]
    shift = m * m if beta is None else beta
    if M.size and M.min() < 1:
        raise ValueError("color_matrix expects positive symbol ids")
    if M.size and M.max() > shift:
        raise ValueError(
            f"symbol {M.max()} exceeds the diagonal shift {shift}; re-substitute first"
        )
    return ColorMatrix(shift_and_translate(M, shift, 2), shift, 2)


def edge_structure(m: int, equal_edge_weights: bool = False) -> np.ndarray:
    """Off-diagonal part R of every m^2 x m^2 PCM (Kronecker form)."""
    I = np.eye(m, dtype=SYMBOL_DTYPE)
    J = np.ones((m, m), dtype=SYMBOL_DTYPE)
    row_weight = COLUMN_EDGE_WEIGHT if equal_edge_weights else ROW_EDGE_WEIGHT
    columns = np.kron(I, COLUMN_EDGE_WEIGHT * (J - I))
    rows = np.kron(J - I, row_weight * I)
    return columns + rows


def build_pcm(C, equal_edge_weights: bool = False) -> np.ndarray:
    """PCM = diag(column-major reshape of C) + R."""
    entries = C.entries if isinstance(C, ColorMatrix) else as_square(C)
    m = entries.shape[0]
    out = edge_structure(m, equal_edge_weights)
    out[np.diag_indices_from(out)] = entries.ravel(order="F")
    return out


def pcm_index(r: int, c: int, m: int) -> int:
    """Diagonal position in the PCM of color-matrix location (r, c)."""
    return c * m + r


def direct_sum_color(A_C: ColorMatrix, B_C: ColorMatrix) -> ColorMatrix:
    """Color matrix ``[[A_C, 3J], [3J, B_C]]`` of the direct sum."""
    a = A_C.entries if isinstance(A_C, ColorMatrix) else as_square(A_C)
    b = B_C.entries if isinstance(B_C, ColorMatrix) else as_square(B_C)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    fill = np.full(a.shape, DIRECT_SUM_FILL, dtype=SYMBOL_DTYPE)
    out = np.block([[a, fill], [fill, b]]).astype(SYMBOL_DTYPE)
    beta = A_C.beta if isinstance(A_C, ColorMatrix) else 0
    gamma = A_C.gamma if isinstance(A_C, ColorMatrix) else 0
    return ColorMatrix(out, beta, gamma)


def pcm_from_symbols(M, equal_edge_weights: bool = False, beta: int | None = None) -> np.ndarray:
    """Convenience: color matrix then PCM, asserting diagonal distinctness."""
    pcm = build_pcm(color_matrix(M, beta), equal_edge_weights)
    assert is_diag_distinct(pcm)
    return pcm
