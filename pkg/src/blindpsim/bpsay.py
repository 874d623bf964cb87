"""Blind p-similarity decision loop (BPSAY) with per-iteration tracing.

The two inputs are substituted jointly, turned into color matrices and
then PCMs, and both PCMs are squared in lockstep.  After every squaring
the mixes are compared (a mismatch proves the inputs are not p-similar)
and the patterns are checked for stability.  When both PCMs stop
refining on the same iteration with matching mixes the verdict is true.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from .pcm import build_pcm, color_matrix, direct_sum_color, pcm_index
from .symbols import (
    DimensionError,
    as_square,
    col_mix,
    consistent_substitute,
    count_symbols,
    diag_mix,
    pattern_of,
    substitute,
)
from .symsqr import refine
from .wspm import CapExceededError, InconclusiveError, PrimesHeuristicConfig, primes_heuristic_refine

ENGINES = ("exact", "primes")
MIX_MODES = ("diag", "column")
DEFAULT_EXACT_CAP = 400


class InvariantViolation(RuntimeError):
    """A property the theory guarantees failed to hold."""


@dataclass(frozen=True)
class BpsayConfig:
    """Settings for one BPSAY run.

    ``max_iters`` of ``None`` means the PCM dimension.  ``exact_cap`` gates
    the exact engine by PCM dimension; larger inputs need ``engine="primes"``.
    """

    max_iters: Optional[int] = None
    mix_mode: str = "diag"
    engine: str = "exact"
    trace: bool = True
    equal_edge_weights: bool = False
    exact_cap: int = DEFAULT_EXACT_CAP
    primes: PrimesHeuristicConfig = field(default_factory=PrimesHeuristicConfig)

    def __post_init__(self):
        if self.max_iters is not None and self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.mix_mode not in MIX_MODES:
            raise ValueError(f"mix_mode must be one of {MIX_MODES}")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}")

    def echo(self) -> dict:
        out = asdict(self)
        out["primes"] = {k: v for k, v in asdict(self.primes).items()}
        return out


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    symbols_S: int
    symbols_T: int
    mixes_equal: bool
    stable_S: bool
    stable_T: bool
    mix_digest_S: str
    mix_digest_T: str

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class BpsayResult:
    psim: bool
    iterations: int
    divergence_iter: Optional[int]
    initial_symbols: tuple[int, int]
    trace: list[IterationRecord]
    mode: str = "pair"
    final_S: Optional[np.ndarray] = field(default=None, repr=False)
    final_T: Optional[np.ndarray] = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "psim": self.psim,
            "iterations": self.iterations,
            "divergence_iter": self.divergence_iter,
            "initial_symbols": list(self.initial_symbols),
            "mode": self.mode,
            "trace": [r.to_json() for r in self.trace],
        }


def mix_digest(mix: tuple) -> str:
    """SHA-256 of a sorted mix; independent of the order entries were read."""
    return hashlib.sha256(json.dumps(mix, separators=(",", ":")).encode()).hexdigest()


def _mix_fn(mode: str) -> Callable:
    return diag_mix if mode == "diag" else col_mix


def _refiner(cfg: BpsayConfig, n: int) -> Callable:
    if cfg.engine == "exact":
        if n > cfg.exact_cap:
            raise CapExceededError(
                f"PCM dimension {n} exceeds the exact-engine cap {cfg.exact_cap}; use engine='primes'"
            )
        return refine
    return lambda *mats: primes_heuristic_refine(*mats, cfg=cfg.primes)


def _cap_reached(cfg: BpsayConfig, cap: int) -> None:
    # the default cap is the theoretical bound, so hitting it is a violation;
    # a caller-supplied smaller cap only makes the run inconclusive
    if cfg.max_iters is None:
        raise InvariantViolation(f"patterns not stable after {cap} iterations")
    raise InconclusiveError(f"patterns not stable within max_iters={cap}")


def _color_pair(M1, M2):
    A, B = consistent_substitute(M1, M2)
    m = A.shape[0]
    k = int(max(A.max(), B.max())) if A.size else 0
    beta = max(m * m, k)
    return color_matrix(A, beta), color_matrix(B, beta)


def pcm_pair(M1, M2, equal_edge_weights: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Jointly substituted PCMs of two inputs (Alg. 1 up to the loop)."""
    A_C, B_C = _color_pair(M1, M2)
    return substitute(build_pcm(A_C, equal_edge_weights), build_pcm(B_C, equal_edge_weights))


def check_psim(M1, M2, cfg: BpsayConfig | None = None, on_iteration: Callable | None = None) -> BpsayResult:
    """Decide whether ``M1`` and ``M2`` are permutation similar.

    ``on_iteration`` receives every :class:`IterationRecord` as it is made,
    which lets callers stream traces.  Raises :class:`InconclusiveError` from
    the numeric engine and :class:`InvariantViolation` if the loop exceeds
    its bound without stabilizing.
    """
    cfg = cfg or BpsayConfig()
    M1 = as_square(np.asarray(M1), "M1")
    M2 = as_square(np.asarray(M2), "M2")
    if M1.shape != M2.shape:
        raise DimensionError(f"dimension mismatch: {M1.shape} vs {M2.shape}")
    S, T = pcm_pair(M1, M2, cfg.equal_edge_weights)
    n = S.shape[0]
    step = _refiner(cfg, n)
    mix = _mix_fn(cfg.mix_mode)
    cap = n if cfg.max_iters is None else cfg.max_iters
    initial = (count_symbols(S), count_symbols(T))
    trace: list[IterationRecord] = []
    pat_S, pat_T = pattern_of(S), pattern_of(T)
    psim = False
    divergence = None
    iteration = 0
    for iteration in range(1, max(cap, 1) + 1):
        S_sq, T_sq = step(S, T)
        mix_S, mix_T = mix(S_sq), mix(T_sq)
        equal = mix_S == mix_T
        new_S, new_T = pattern_of(S_sq), pattern_of(T_sq)
        stable_S, stable_T = new_S == pat_S, new_T == pat_T
        rec = IterationRecord(
            iteration,
            count_symbols(S_sq),
            count_symbols(T_sq),
            equal,
            stable_S,
            stable_T,
            mix_digest(mix_S),
            mix_digest(mix_T),
        )
        if cfg.trace:
            trace.append(rec)
        if on_iteration is not None:
            on_iteration(rec)
        S, T, pat_S, pat_T = S_sq, T_sq, new_S, new_T
        if not equal:
            divergence = iteration
            break
        if stable_S and stable_T:
            psim = True
            break
    else:
        _cap_reached(cfg, cap)
    return BpsayResult(psim, iteration, divergence, initial, trace, "pair", S, T)


def direct_sum_locations(m: int) -> tuple[np.ndarray, np.ndarray]:
    """PCM diagonal positions holding the A block and the B block."""
    rows, cols = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    a = pcm_index(rows.ravel(), cols.ravel(), 2 * m)
    b = pcm_index(rows.ravel() + m, cols.ravel() + m, 2 * m)
    return np.asarray(a), np.asarray(b)


def check_psim_direct_sum(M1, M2, cfg: BpsayConfig | None = None,
                          on_iteration: Callable | None = None) -> BpsayResult:
    """Single-PCM variant: refine the PCM of the direct-sum color matrix.

    Squares to a stable pattern, then compares the multiset of diagonal
    symbols over the A locations with that over the B locations.
    """
    cfg = cfg or BpsayConfig()
    M1 = as_square(np.asarray(M1), "M1")
    M2 = as_square(np.asarray(M2), "M2")
    if M1.shape != M2.shape:
        raise DimensionError(f"dimension mismatch: {M1.shape} vs {M2.shape}")
    m = M1.shape[0]
    A_C, B_C = _color_pair(M1, M2)
    (P,) = substitute(build_pcm(direct_sum_color(A_C, B_C), cfg.equal_edge_weights))
    n = P.shape[0]
    step = _refiner(cfg, n)
    cap = n if cfg.max_iters is None else cfg.max_iters
    loc_a, loc_b = direct_sum_locations(m)
    initial = count_symbols(P)
    trace: list[IterationRecord] = []
    pat = pattern_of(P)
    for iteration in range(1, max(cap, 1) + 1):
        (nxt,) = step(P)
        d = np.diag(nxt)
        mix_a = tuple(sorted(d[loc_a].tolist()))
        mix_b = tuple(sorted(d[loc_b].tolist()))
        new = pattern_of(nxt)
        stable = new == pat
        rec = IterationRecord(
            iteration, count_symbols(nxt), count_symbols(nxt), mix_a == mix_b,
            stable, stable, mix_digest(mix_a), mix_digest(mix_b),
        )
        if cfg.trace:
            trace.append(rec)
        if on_iteration is not None:
            on_iteration(rec)
        P, pat = nxt, new
        if stable:
            break
    else:
        _cap_reached(cfg, cap)
    psim = trace[-1].mixes_equal if cfg.trace else rec.mixes_equal
    divergence = None
    if not psim:
        records = trace if cfg.trace else [rec]
        divergence = next(r.iteration for r in records if not r.mixes_equal)
    return BpsayResult(psim, iteration, divergence, (initial, initial), trace, "direct-sum", P, P)
