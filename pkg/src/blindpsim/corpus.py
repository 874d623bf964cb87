"""Test corpora: small graphs, random symbol matrices, permutations.

All generators are deterministic given a seed.  The exhaustive graph list
is built by orderly augmentation: every graph on ``n`` vertices arises from
one on ``n - 1`` vertices by adding a vertex, and duplicates are removed by
a brute-force canonical code (the minimum edge bitmask over all vertex
relabelings).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

# OEIS A000088: number of graphs on n unlabeled vertices
KNOWN_GRAPH_COUNTS = {0: 1, 1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044}


def _edge_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    iu = np.triu_indices(n, 1)
    return iu[0], iu[1]


@lru_cache(maxsize=None)
def _perm_edge_maps(n: int) -> np.ndarray:
    """For every permutation, where each upper-triangle edge slot moves to."""
    r, c = _edge_index(n)
    slot = -np.ones((n, n), dtype=np.int64)
    slot[r, c] = np.arange(r.size)
    slot[c, r] = np.arange(r.size)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    return slot[perms[:, r], perms[:, c]]


def canonical_code(adjacency) -> int:
    """Smallest edge bitmask of the graph over all relabelings."""
    A = np.asarray(adjacency)
    n = A.shape[0]
    r, c = _edge_index(n)
    bits = A[r, c].astype(bool)
    if r.size == 0:
        return 0
    maps = _perm_edge_maps(n)
    weights = (1 << np.arange(r.size, dtype=np.int64))
    codes = np.zeros(maps.shape[0], dtype=np.int64)
    for e in np.flatnonzero(bits):
        codes |= weights[maps[:, e]]
    return int(codes.min())


def _from_code(n: int, code: int) -> np.ndarray:
    r, c = _edge_index(n)
    A = np.zeros((n, n), dtype=np.int64)
    for e in range(r.size):
        if code >> e & 1:
            A[r[e], c[e]] = A[c[e], r[e]] = 1
    return A


@lru_cache(maxsize=None)
def _graph_codes(n: int) -> tuple[int, ...]:
    if n <= 1:
        return (0,)
    seen = set()
    for code in _graph_codes(n - 1):
        base = _from_code(n - 1, code)
        for mask in range(1 << (n - 1)):
            A = np.zeros((n, n), dtype=np.int64)
            A[:-1, :-1] = base
            nbrs = [v for v in range(n - 1) if mask >> v & 1]
            A[n - 1, nbrs] = A[nbrs, n - 1] = 1
            seen.add(canonical_code(A))
    return tuple(sorted(seen))


def all_graphs(n: int) -> list[np.ndarray]:
    """One adjacency matrix per isomorphism class of graphs on ``n`` vertices."""
    if n < 0 or n > 7:
        raise ValueError("exhaustive graph generation supports 0 <= n <= 7")
    if n == 0:
        return [np.zeros((0, 0), dtype=np.int64)]
    return [_from_code(n, code) for code in _graph_codes(n)]


def petersen_graph() -> np.ndarray:
    """Petersen graph as the Kneser graph K(5, 2): 2-subsets adjacent iff disjoint."""
    subsets = list(itertools.combinations(range(5), 2))
    n = len(subsets)
    A = np.zeros((n, n), dtype=np.int64)
    for a, s in enumerate(subsets):
        for b, t in enumerate(subsets):
            if not set(s) & set(t):
                A[a, b] = 1
    return A


def petersen_automorphism_generators() -> list[np.ndarray]:
    """Generators of Aut(Petersen) = S5 acting on the 2-subsets of {0..4}."""
    subsets = list(itertools.combinations(range(5), 2))
    index = {s: i for i, s in enumerate(subsets)}
    out = []
    for sigma in ((1, 0, 2, 3, 4), (1, 2, 3, 4, 0)):
        perm = [index[tuple(sorted((sigma[a], sigma[b])))] for a, b in subsets]
        out.append(np.array(perm, dtype=np.int64))
    return out


def random_graph(m: int, rng: np.random.Generator, density: float = 0.5) -> np.ndarray:
    U = np.triu(rng.random((m, m)) < density, 1)
    return (U | U.T).astype(np.int64)


def random_symbol_matrix(m: int, rng: np.random.Generator, n_symbols: int = 3,
                         symmetric: bool = False) -> np.ndarray:
    M = rng.integers(1, n_symbols + 1, size=(m, m)).astype(np.int64)
    if symmetric:
        M = np.triu(M) + np.triu(M, 1).T
    return M


def random_diag_distinct_symmetric(m: int, rng: np.random.Generator,
                                   max_symbols: int = 6) -> np.ndarray:
    """Symmetric matrix with disjoint diagonal and off-diagonal alphabets."""
    if m == 1:
        return np.array([[1]], dtype=np.int64)
    n_off = int(rng.integers(1, max(2, max_symbols - 1)))
    n_diag = int(rng.integers(1, max_symbols - n_off + 1))
    M = rng.integers(1, n_off + 1, size=(m, m)).astype(np.int64)
    M = np.triu(M, 1) + np.triu(M, 1).T
    M[np.diag_indices(m)] = rng.integers(n_off + 1, n_off + n_diag + 1, size=m)
    return M


def random_permutation(m: int, rng: np.random.Generator) -> np.ndarray:
    return rng.permutation(m).astype(np.int64)


def permuted_copy(M, p) -> np.ndarray:
    M = np.asarray(M)
    return M[np.ix_(p, p)]


def degree_preserving_swaps(A, rng: np.random.Generator, swaps: int = 10) -> np.ndarray:
    """Randomly rewire edges (a-b, c-d) -> (a-d, c-b) keeping all degrees.

    Produces hard non-isomorphic pairs: the degree sequence, and hence the
    first-round color refinement, is unchanged.
    """
    A = np.array(A, dtype=np.int64)
    n = A.shape[0]
    for _ in range(swaps * 10):
        if swaps <= 0:
            break
        edges = np.argwhere(np.triu(A, 1))
        if len(edges) < 2:
            break
        e1, e2 = edges[rng.choice(len(edges), 2, replace=False)]
        a, b = e1
        c, d = e2 if rng.random() < 0.5 else e2[::-1]
        if len({a, b, c, d}) < 4 or A[a, d] or A[c, b]:
            continue
        A[a, b] = A[b, a] = A[c, d] = A[d, c] = 0
        A[a, d] = A[d, a] = A[c, b] = A[b, c] = 1
        swaps -= 1
    assert n == A.shape[0]
    return A
