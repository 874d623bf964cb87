"""Widely-spaced primes matrices and the numeric-primes heuristic engine.

A widely-spaced primes matrix (WSPM) replaces the symbols of a symmetric,
diag-distinct matrix by primes that grow fast enough that every inner
product of the numeric square decodes uniquely into its term multiset.
The exact paths use Python integers; they exist to check the refinement
theorems on small inputs, since prime sizes grow doubly exponentially.

The heuristic engine (:func:`primes_heuristic_refine`) is the fast path:
ordinary small primes, exact integer products, and an overflow ceiling
that turns into :class:`InconclusiveError` instead of a verdict.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import gmpy2
import numpy as np

from .symbols import (
    SYMBOL_DTYPE,
    Pattern,
    as_square,
    is_diag_distinct,
    is_symmetric,
    pattern_of,
    substitute,
)

PRIMALITY_ROUNDS = 40
DEFAULT_MAX_SYMBOLS = 8
DEFAULT_MAX_DIM = 6
DEFAULT_PAIR_MAX_SYMBOLS = 6
_TABLE_RESOURCE = "prime_table.json"


class InconclusiveError(ArithmeticError):
    """The numeric engine left its exact range; no verdict can be given."""


class CapExceededError(ValueError):
    """An exact path was asked to handle an input above its size cap."""


# --- primes -----------------------------------------------------------------


def is_probable_prime(n: int) -> bool:
    """Primality test used for every prime this module hands out.

    GMP runs a Baillie-PSW test followed by extra Miller-Rabin rounds.
    BPSW has no pseudoprimes below 2**64, so small answers are exact;
    above that the error bound is below 4**-PRIMALITY_ROUNDS.
    """
    return bool(gmpy2.is_prime(int(n), PRIMALITY_ROUNDS))


def _bound_key(bound: int) -> str:
    return hashlib.sha256(str(int(bound)).encode("ascii")).hexdigest()


@lru_cache(maxsize=1)
def _load_table() -> dict[str, int]:
    try:
        text = resources.files("blindpsim").joinpath("data", _TABLE_RESOURCE).read_text()
    except (FileNotFoundError, ModuleNotFoundError):
        return {}
    return {k: int(v) for k, v in json.loads(text)["gaps"].items()}


def search_prime_above(bound: int) -> int:
    """Smallest integer above ``bound`` passing :func:`is_probable_prime`."""
    cand = int(gmpy2.next_prime(int(bound)))
    while not is_probable_prime(cand):
        cand = int(gmpy2.next_prime(cand))
    return cand


@lru_cache(maxsize=None)
def prime_above(bound: int) -> int:
    """Smallest prime strictly greater than ``bound``.

    Large searches are expensive (minutes at a few thousand digits), so a
    table of precomputed gaps ``prime - bound`` ships with the package.  A
    tabled answer is re-tested for primality once per process.
    """
    bound = int(bound)
    gap = _load_table().get(_bound_key(bound))
    if gap is not None:
        cand = bound + gap
        if is_probable_prime(cand):
            return cand
    return search_prime_above(bound)


@lru_cache(maxsize=None)
def widely_spaced_primes(dim: int, count: int, start: int | None = None, k: int = 1) -> tuple[int, ...]:
    """Primes with ``p_1 > start`` (default ``dim*k**2``) and ``p_i > dim*p_{i-1}**2``."""
    if dim < 1 or count < 0:
        raise ValueError("dim must be positive and count non-negative")
    bound = dim * k * k if start is None else int(start)
    out: list[int] = []
    for _ in range(count):
        p = prime_above(bound)
        out.append(p)
        bound = dim * p * p
    return tuple(out)


def first_primes(count: int) -> np.ndarray:
    """The first ``count`` primes (2, 3, 5, ...) by a numpy sieve."""
    if count <= 0:
        return np.zeros(0, dtype=np.int64)
    limit = 16
    while True:
        sieve = np.ones(limit + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, int(limit ** 0.5) + 1):
            if sieve[p]:
                sieve[p * p::p] = False
        primes = np.flatnonzero(sieve)
        if primes.size >= count:
            return primes[:count].astype(np.int64)
        limit *= 2


# --- exact integer products -------------------------------------------------


def int_matmul(A, B) -> np.ndarray:
    """Exact product of non-negative integer matrices as a Python-int array.

    Small magnitudes use int64 directly; moderate ones are split into
    limbs so every partial product fits int64; huge ones fall back to
    object-dtype arithmetic.
    """
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ValueError(f"cannot multiply shapes {A.shape} and {B.shape}")
    inner = A.shape[1]
    if A.size == 0 or B.size == 0 or inner == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=object)
    if min(A.min(), B.min()) < 0:
        raise ValueError("int_matmul expects non-negative entries")
    maxv = int(max(A.max(), B.max()))
    if maxv * maxv * inner < 2 ** 63:
        return (A.astype(np.int64) @ B.astype(np.int64)).astype(object)
    limb_bits = max(1, (62 - inner.bit_length()) // 2)
    n_limbs = -(-maxv.bit_length() // limb_bits)
    if n_limbs > 4:
        return A.dot(B)
    mask = (1 << limb_bits) - 1
    la = [((A >> (limb_bits * t)) & mask).astype(np.int64) for t in range(n_limbs)]
    lb = [((B >> (limb_bits * t)) & mask).astype(np.int64) for t in range(n_limbs)]
    out = np.zeros((A.shape[0], B.shape[1]), dtype=object)
    for s in range(n_limbs):
        for t in range(n_limbs):
            out = out + ((la[s] @ lb[t]).astype(object) << (limb_bits * (s + t)))
    return out


# --- widely-spaced primes matrices -------------------------------------------


@dataclass(frozen=True)
class WspMatrix:
    """Symmetric integer matrix whose symbols are widely-spaced primes.

    ``primes`` lists the chain in increasing order; the first
    ``n_offdiag`` are the off-diagonal symbols.  ``symbols`` records which
    source symbol each prime replaced.
    """

    entries: np.ndarray
    primes: tuple[int, ...]
    n_offdiag: int
    symbols: tuple = field(default=())

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def pattern(self) -> Pattern:
        return pattern_of(self.entries)

    def is_diagonally_dominant(self) -> bool:
        E = self.entries
        for i in range(self.n):
            off = sum(int(E[i, j]) for j in range(self.n) if j != i)
            if int(E[i, i]) <= off:
                return False
        return True


def _check_wspm_input(M, max_symbols: int, max_dim: int) -> np.ndarray:
    M = as_square(M)
    if not is_symmetric(M):
        raise ValueError("wspm requires a symmetric matrix")
    if not is_diag_distinct(M):
        raise ValueError("wspm requires diagonal symbols distinct from off-diagonal")
    if M.shape[0] > max_dim:
        raise CapExceededError(f"dimension {M.shape[0]} exceeds the wspm cap {max_dim}")
    n_symbols = len(set(M.ravel().tolist()))
    if n_symbols > max_symbols:
        raise CapExceededError(f"{n_symbols} symbols exceed the wspm cap {max_symbols}")
    return M


def _assign(M: np.ndarray, primes: tuple[int, ...]) -> tuple[np.ndarray, int, tuple]:
    n = M.shape[0]
    mask = np.eye(n, dtype=bool)
    off = sorted(set(M[~mask].tolist()))
    diag = sorted(set(M[mask].tolist()))
    symbols = tuple(off) + tuple(diag)
    lookup = dict(zip(symbols, primes))
    E = np.empty((n, n), dtype=object)
    for (i, j), s in np.ndenumerate(M):
        E[i, j] = lookup[s.item() if isinstance(s, np.generic) else s]
    return E, len(off), symbols


def build_wspm(M, k: int = 1, start: int | None = None,
               max_symbols: int = DEFAULT_MAX_SYMBOLS, max_dim: int = DEFAULT_MAX_DIM) -> WspMatrix:
    """WSPM with the pattern of ``M``: off-diagonal symbols take the small primes."""
    M = _check_wspm_input(M, max_symbols, max_dim)
    n_symbols = len(set(M.ravel().tolist()))
    primes = widely_spaced_primes(M.shape[0], n_symbols, start, k)
    E, n_off, symbols = _assign(M, primes)
    return WspMatrix(E, primes, n_off, symbols)


def wspm_square(W: WspMatrix) -> np.ndarray:
    return int_matmul(W.entries, W.entries)


def wspm_square_refine(W: WspMatrix) -> Pattern:
    """Pattern of the exact numeric square ``W x W``."""
    return pattern_of(wspm_square(W))


def wspm_pair(M, max_symbols: int = DEFAULT_PAIR_MAX_SYMBOLS,
              max_dim: int = DEFAULT_MAX_DIM) -> tuple[WspMatrix, WspMatrix]:
    """Two WSPMs of ``M`` with disjoint chains; W2's starts above ``dim*p_n**2``."""
    M = _check_wspm_input(M, max_symbols, max_dim)
    W1 = build_wspm(M, max_symbols=max_symbols, max_dim=max_dim)
    start = W1.n * W1.primes[-1] ** 2 if W1.primes else W1.n
    W2 = build_wspm(M, start=start, max_symbols=max_symbols, max_dim=max_dim)
    return W1, W2


def wspm_pair_product(M, **caps) -> np.ndarray:
    """Element-wise ``min(W1 x W2, (W1 x W2)^T)`` as a Python-int array."""
    W1, W2 = wspm_pair(M, **caps)
    X = int_matmul(W1.entries, W2.entries)
    return np.minimum(X, X.T)


def wspm_pair_refine(M, **caps) -> Pattern:
    """Pattern of the symmetrized pair product; matches one symbolic squaring."""
    return pattern_of(wspm_pair_product(M, **caps))


def decompose_terms(value: int, terms) -> Counter:
    """Greedy descending decomposition of ``value`` over candidate terms.

    ``terms`` maps a label to its positive integer term value.  Returns the
    multiplicity of each label.  Raises ``ValueError`` if a remainder is
    left over, which means the terms were not widely spaced enough.
    """
    rest = int(value)
    counts: Counter = Counter()
    for label, t in sorted(terms.items(), key=lambda kv: kv[1], reverse=True):
        t = int(t)
        if t <= rest:
            q, rest = divmod(rest, t)
            counts[label] = q
    if rest:
        raise ValueError(f"value not decomposable; remainder {rest}")
    return counts


def square_term_values(primes) -> dict[tuple[int, int], int]:
    """All products ``p_a*p_b`` (a <= b) of a prime chain, keyed by index pair."""
    ps = [int(p) for p in primes]
    return {(a, b): ps[a] * ps[b] for a in range(len(ps)) for b in range(a, len(ps))}


# --- numeric-primes heuristic ------------------------------------------------


@dataclass(frozen=True)
class PrimesHeuristicConfig:
    """Settings of the numeric-primes engine.

    ``symbol_bits`` bounds the prime symbols, ``accumulate_bits`` the inner
    products; ``ceiling`` defaults to ``2**(accumulate_bits - 2)``.  Above
    ``switch_threshold`` symbols the ids themselves replace primes.
    """

    symbol_bits: int = 64
    accumulate_bits: int = 128
    ceiling: int | None = None
    resubstitute: bool = True
    switch_threshold: int = 10_000

    def __post_init__(self):
        if self.symbol_bits < 2 or self.accumulate_bits < self.symbol_bits:
            raise ValueError("need 2 <= symbol_bits <= accumulate_bits")
        if self.ceiling is not None and not 0 < self.ceiling < 2 ** self.accumulate_bits:
            raise ValueError("ceiling must lie below the accumulator range")

    @property
    def limit(self) -> int:
        return self.ceiling if self.ceiling is not None else 2 ** (self.accumulate_bits - 2)


def _numeric_symbols(ids: np.ndarray, k: int, cfg: PrimesHeuristicConfig) -> np.ndarray:
    if k > cfg.switch_threshold:
        values = np.arange(1, k + 1, dtype=np.int64)
    else:
        values = first_primes(k)
    if k and int(values[-1]) >= 2 ** (cfg.symbol_bits - 1):
        raise InconclusiveError("symbol values exceed the configured symbol width")
    return values[ids - 1]


def primes_heuristic_refine(*mats, cfg: PrimesHeuristicConfig | None = None) -> tuple[np.ndarray, ...]:
    """One numeric squaring of each matrix with joint re-substitution.

    Symbols are replaced by the first primes, the squares are computed
    exactly, and new ids are assigned jointly to the distinct
    ``(old id, product)`` pairs.  Keying on the old id keeps every step a
    refinement and keeps the diagonal distinct.  Raises
    :class:`InconclusiveError` if a product passes the ceiling.
    """
    cfg = cfg or PrimesHeuristicConfig()
    if not mats:
        return ()
    checked = [as_square(M) for M in mats]
    for M in checked:
        if not is_symmetric(M):
            raise ValueError("numeric squaring requires a symmetric matrix")
    ids = substitute(*checked)
    k = int(max(int(I.max()) for I in ids)) if checked[0].size else 0
    products = []
    for I in ids:
        W = _numeric_symbols(I, k, cfg)
        X = int_matmul(W, W)
        if X.size and int(X.max()) > cfg.limit:
            raise InconclusiveError(f"inner product above the ceiling 2**{cfg.limit.bit_length() - 1}")
        products.append(X)
    if not cfg.resubstitute:
        return tuple(np.asarray(X.astype(np.int64) if cfg.limit < 2 ** 63 else X) for X in products)
    n = checked[0].shape[0]
    old = np.concatenate([I.ravel() for I in ids]).astype(np.int64)
    new = np.concatenate([X.ravel() for X in products])
    if new.size and int(new.max()) < 2 ** 63:
        keys = np.stack([old, new.astype(np.int64)], axis=1)
        _, inv = np.unique(keys, axis=0, return_inverse=True)
        inv = inv.reshape(-1)
    else:
        pairs = list(zip(old.tolist(), new.tolist()))
        rank = {p: r for r, p in enumerate(sorted(set(pairs)))}
        inv = np.fromiter((rank[p] for p in pairs), dtype=np.int64, count=len(pairs))
    out = inv.astype(SYMBOL_DTYPE) + 1
    size = n * n
    return tuple(out[t * size:(t + 1) * size].reshape(n, n) for t in range(len(checked)))


def primes_heuristic_pattern(M, cfg: PrimesHeuristicConfig | None = None) -> Pattern:
    (out,) = primes_heuristic_refine(M, cfg=cfg)
    return pattern_of(out)
