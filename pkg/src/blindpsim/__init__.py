"""Blind permutation-similarity testing.

Two square matrices are p-similar when one is a symmetric permutation of
the other.  This package decides that question by building permutation
constraint matrices (PCMs) and refining them by symbolic squaring, recovers
the permutation, and checks the method against brute-force oracles.
"""

import os as _os

# BLINDPSIM_THREADS caps the BLAS/OpenMP pools; it must be set before numpy loads
_threads = _os.environ.get("BLINDPSIM_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

__version__ = "0.1.0"

from .bpsay import (  # noqa: E402
    BpsayConfig,
    BpsayResult,
    InvariantViolation,
    IterationRecord,
    check_psim,
    check_psim_direct_sum,
)
from .findperm import CounterexampleError, exchange_ij, find_permutation  # noqa: E402
from .oracle import automorphisms, brute_psim, espp_pattern, orbits, pcm_orbits  # noqa: E402
from .pcm import build_pcm, color_matrix, direct_sum_color, shift_and_translate  # noqa: E402
from .symbols import (  # noqa: E402
    Pattern,
    col_mix,
    consistent_substitute,
    diag_mix,
    full_mix,
    pattern_difference,
    pattern_of,
    refines,
    sym_sub,
)
from .symsqr import canonical_string, refine, stable_pattern, sym_mult, sym_sqr  # noqa: E402
from .validate import CampaignConfig, validate_corpus  # noqa: E402
from .wspm import (  # noqa: E402
    InconclusiveError,
    PrimesHeuristicConfig,
    WspMatrix,
    build_wspm,
    primes_heuristic_refine,
    wspm_pair_refine,
    wspm_square_refine,
)

__all__ = [
    "BpsayConfig", "BpsayResult", "CampaignConfig", "CounterexampleError", "InconclusiveError",
    "InvariantViolation", "IterationRecord", "Pattern", "PrimesHeuristicConfig", "WspMatrix",
    "automorphisms", "brute_psim", "build_pcm", "build_wspm", "canonical_string",
    "check_psim", "check_psim_direct_sum", "col_mix", "color_matrix", "consistent_substitute",
    "diag_mix", "direct_sum_color", "espp_pattern", "exchange_ij", "find_permutation",
    "full_mix", "orbits", "pattern_difference", "pattern_of", "pcm_orbits",
    "primes_heuristic_refine", "refine", "refines", "shift_and_translate", "stable_pattern",
    "sym_mult", "sym_sqr", "sym_sub", "validate_corpus", "wspm_pair_refine", "wspm_square_refine",
]
