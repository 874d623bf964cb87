"""Brute-force ground truth: p-similarity, automorphism orbits and ESPP.

Everything here is exhaustive and therefore capped at small sizes.  These
functions are the independent oracles the decision procedure is checked
against; they share no refinement code with it.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Optional

import numpy as np

from .symbols import (
    DimensionError,
    Pattern,
    as_square,
    consistent_substitute,
    diag_mix,
    full_mix,
    is_symmetric,
    pattern_of,
    substitute,
)
from .wspm import CapExceededError

DEFAULT_CAP = 9
ESPP_CAP = 30
_PERM_CHUNK = 40_000


def _perm_chunks(m: int) -> Iterable[np.ndarray]:
    it = itertools.permutations(range(m))
    while True:
        block = list(itertools.islice(it, _PERM_CHUNK))
        if not block:
            return
        yield np.array(block, dtype=np.int64).reshape(len(block), m)


def _check_cap(m: int, cap: int) -> None:
    if m > cap:
        raise CapExceededError(f"dimension {m} exceeds the brute-force cap {cap}")


def _matching_perms(A: np.ndarray, B: np.ndarray, first_only: bool) -> list[np.ndarray]:
    """All p with ``A[p][:, p] == B``, pruned by diagonal compatibility."""
    m = A.shape[0]
    dA, dB = np.diag(A), np.diag(B)
    found = []
    for P in _perm_chunks(m):
        ok = np.all(dA[P] == dB[None, :], axis=1)
        P = P[ok]
        if P.size == 0:
            continue
        images = A[P[:, :, None], P[:, None, :]]
        hits = P[np.all(images == B[None], axis=(1, 2))]
        if hits.size:
            if first_only:
                return [hits[0]]
            found.extend(hits)
    return found


def brute_psim(A, B, cap: int = DEFAULT_CAP) -> tuple[bool, Optional[np.ndarray]]:
    """Exhaustive p-similarity test; returns a witness ``p`` with ``A(p,p) = B``."""
    A = as_square(np.asarray(A), "A")
    B = as_square(np.asarray(B), "B")
    if A.shape != B.shape:
        raise DimensionError(f"dimension mismatch: {A.shape} vs {B.shape}")
    _check_cap(A.shape[0], cap)
    A, B = consistent_substitute(A, B)
    if A.shape[0] == 0:
        return True, np.zeros(0, dtype=np.int64)
    if diag_mix(A) != diag_mix(B) or full_mix(A) != full_mix(B):
        return False, None
    hits = _matching_perms(A, B, first_only=True)
    return (True, hits[0]) if hits else (False, None)


def automorphisms(M, cap: int = DEFAULT_CAP) -> list[np.ndarray]:
    """Every permutation ``p`` with ``M(p, p) = M``."""
    (M,) = substitute(as_square(np.asarray(M)))
    _check_cap(M.shape[0], cap)
    if M.shape[0] == 0:
        return [np.zeros(0, dtype=np.int64)]
    return _matching_perms(M, M, first_only=False)


def orbit_partition(n: int, perms: Iterable[np.ndarray], symmetric: bool = False) -> Pattern:
    """Orbits on the n*n locations of the group generated by ``perms``.

    ``(i, j)`` is joined with ``(p(i), p(j))`` for every given ``p``.  With a
    full group this is one pass; with generators the union-find closure is
    exactly the orbit relation of the generated group.  ``symmetric`` also
    joins ``(i, j)`` with ``(j, i)``, the finest partition a symmetric
    refinement can reach.
    """
    parent = np.arange(n * n)

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for p in perms:
        p = np.asarray(p)
        image = (p[:, None] * n + p[None, :]).ravel()
        for a, b in zip(range(n * n), image.tolist()):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    if symmetric:
        for i in range(n):
            for j in range(i + 1, n):
                ra, rb = find(i * n + j), find(j * n + i)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    labels = np.array([find(x) for x in range(n * n)]).reshape(n, n)
    return pattern_of(labels)


def orbits(M, cap: int = DEFAULT_CAP, symmetric: bool = False) -> Pattern:
    """Orbit partition of Aut(M) acting on locations by ``(i,j) -> (p(i),p(j))``."""
    M = as_square(np.asarray(M))
    return orbit_partition(M.shape[0], automorphisms(M, cap), symmetric)


def lift_permutation(p) -> np.ndarray:
    """``P kron P`` as an index map on PCM positions ``c*m + r``."""
    p = np.asarray(p, dtype=np.int64)
    m = p.size
    r = np.tile(np.arange(m), m)
    c = np.repeat(np.arange(m), m)
    out = np.empty(m * m, dtype=np.int64)
    out[c * m + r] = p[c] * m + p[r]
    return out


def lifted_pcm_automorphisms(M, perms=None, cap: int = DEFAULT_CAP) -> list[np.ndarray]:
    """Automorphisms of PCM(color(M)) obtained by lifting those of ``M``.

    ``perms`` may supply automorphisms (or generators) of ``M`` directly,
    which is how inputs above the brute-force cap are handled.
    """
    M = as_square(np.asarray(M))
    base = automorphisms(M, cap) if perms is None else [np.asarray(p) for p in perms]
    for p in base:
        if not np.array_equal(M[np.ix_(p, p)], M):
            raise ValueError("supplied permutation is not an automorphism of M")
    return [lift_permutation(p) for p in base]


def pcm_orbits(M, perms=None, cap: int = DEFAULT_CAP, symmetric: bool = False) -> Pattern:
    """Orbit partition of the PCM of ``M`` under lifted automorphisms."""
    M = as_square(np.asarray(M))
    m = M.shape[0]
    return orbit_partition(m * m, lifted_pcm_automorphisms(M, perms, cap), symmetric)


def matrix_powers(M, count: int) -> list[np.ndarray]:
    """``I, M, M^2, ...`` (``count`` matrices) with exact Python integers."""
    M = np.asarray(M, dtype=object)
    n = M.shape[0]
    eye = np.zeros((n, n), dtype=object)
    for i in range(n):
        eye[i, i] = 1
    out = [eye]
    for _ in range(count - 1):
        out.append(out[-1].dot(M))
    return out


def espp_pattern(M, cap: int = ESPP_CAP) -> Pattern:
    """Pattern of per-location strings across the stacked powers ``I..M^(m-1)``.

    Non-integer tokens are substituted first.  All ``m`` layers are always
    computed: an intermediate layer that adds nothing does not prove later
    layers add nothing.
    """
    M = as_square(np.asarray(M))
    if not is_symmetric(M):
        raise ValueError("espp_pattern requires a symmetric matrix")
    m = M.shape[0]
    _check_cap(m, cap)
    if m == 0:
        return pattern_of(M)
    if M.dtype.kind not in "iu" and not all(isinstance(x, int) for x in M.ravel().tolist()):
        (M,) = substitute(M)
    layers = matrix_powers(M, max(m, 1))
    stacked = np.empty((m, m), dtype=object)
    for i in range(m):
        for j in range(m):
            stacked[i, j] = tuple(int(L[i, j]) for L in layers)
    return pattern_of(stacked)
