"""Command-line interface.

Exit codes: 0 completed (the verdict is in the output), 2 input error,
3 inconclusive, 4 invariant violation or recorded counterexample.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bpsay import BpsayConfig, InvariantViolation, check_psim, check_psim_direct_sum
from .findperm import CounterexampleError, find_permutation
from .io import FORMATS, parse_input
from .oracle import espp_pattern, orbits, pcm_orbits
from .pcm import shift_and_translate
from .symbols import DimensionError, is_diag_distinct, is_symmetric, pattern_of, refines, substitute
from .symsqr import refine
from .validate import CampaignConfig, validate_corpus
from .wspm import (
    InconclusiveError,
    build_wspm,
    decompose_terms,
    square_term_values,
    wspm_pair_refine,
    wspm_square,
    wspm_square_refine,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3
EXIT_INVARIANT = 4


def _emit(obj: dict) -> None:
    json.dump(obj, sys.stdout, indent=2, default=_default)
    sys.stdout.write("\n")


def _default(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    return str(x)


def _load(path: str, fmt: str | None):
    return parse_input(path, fmt)


def _bpsay_config(args) -> BpsayConfig:
    return BpsayConfig(
        max_iters=args.max_iters,
        mix_mode=args.mix,
        engine=args.engine,
        equal_edge_weights=args.equal_edge_weights,
    )


def _runtime_echo() -> dict:
    return {"version": __version__, "threads": os.environ.get("BLINDPSIM_THREADS")}


def cmd_check(args) -> int:
    a, b = _load(args.A, args.format), _load(args.B, args.format)
    cfg = _bpsay_config(args)
    trace_fh = open(args.trace, "w") if args.trace else None
    try:
        def stream(rec):
            if trace_fh is not None:
                trace_fh.write(json.dumps(rec.to_json()) + "\n")
                trace_fh.flush()

        run = check_psim_direct_sum if args.direct_sum else check_psim
        res = run(a.matrix, b.matrix, cfg, on_iteration=stream)
    finally:
        if trace_fh is not None:
            trace_fh.close()
    out = res.to_json()
    out["config"] = cfg.echo()
    out["runtime"] = _runtime_echo()
    out["inputs"] = {"A": a.provenance | {"format": a.format}, "B": b.provenance | {"format": b.format}}
    if args.figures:
        out["artifacts"] = _check_artifacts(res, Path(args.figures))
    _emit(out)
    return EXIT_OK


def _check_artifacts(res, out_dir: Path) -> list[str]:
    from .plotting import plot_pattern, plot_trajectory

    out_dir.mkdir(parents=True, exist_ok=True)
    files = []
    table = out_dir / "trace.csv"
    with open(table, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iteration", "symbols_S", "symbols_T", "mixes_equal", "stable_S", "stable_T"])
        for r in res.trace:
            w.writerow([r.iteration, r.symbols_S, r.symbols_T, r.mixes_equal, r.stable_S, r.stable_T])
    files.append(str(table))
    files.append(str(plot_trajectory(res.trace, out_dir / "trajectory.png")))
    files.append(str(plot_pattern(res.final_S, out_dir / "pattern_S.png", "final S")))
    if res.mode == "pair":
        files.append(str(plot_pattern(res.final_T, out_dir / "pattern_T.png", "final T")))
    return files


def cmd_find_perm(args) -> int:
    a, b = _load(args.A, args.format), _load(args.B, args.format)
    cfg = _bpsay_config(args)
    try:
        res = find_permutation(a.matrix, b.matrix, cfg)
    except CounterexampleError as exc:
        _emit({"error": str(exc), "counterexample": exc.payload})
        return EXIT_INVARIANT
    out = res.to_json(one_based=True)
    out["config"] = cfg.echo()
    _emit(out)
    return EXIT_OK


def _pattern_json(P) -> dict:
    return {"cells": P.num_cells, "cell_of": P.cell_of.tolist()}


def cmd_orbits(args) -> int:
    M = _load(args.M, args.format).matrix
    P = pcm_orbits(M, cap=args.cap, symmetric=args.symmetric) if args.pcm else orbits(
        M, cap=args.cap, symmetric=args.symmetric
    )
    _emit({"pcm": args.pcm, "symmetric": args.symmetric, **_pattern_json(P)})
    return EXIT_OK


def cmd_espp(args) -> int:
    M = _load(args.M, args.format).matrix
    _emit(_pattern_json(espp_pattern(M, cap=args.cap)))
    return EXIT_OK


def _recolor(M) -> tuple[np.ndarray, bool]:
    """Diag-distinct symmetric symbol matrix with the pattern of ``M``'s cells."""
    (S,) = substitute(M)
    if is_diag_distinct(S):
        return S, False
    return shift_and_translate(S, int(S.max()), 0), True


def cmd_wspm_verify(args) -> int:
    M = _load(args.M, args.format).matrix
    if not is_symmetric(M):
        raise DimensionError("wspm-verify needs a symmetric matrix")
    S, recolored = _recolor(M)
    W = build_wspm(S, max_symbols=args.max_symbols)
    (sq,) = refine(S)
    P_ww = wspm_square_refine(W)
    checks = {
        "monotone": refines(P_ww, W.pattern()),
        "diagonal_equal": bool(np.array_equal(P_ww.diagonal(), pattern_of(sq).diagonal())),
        "pair_equal": wspm_pair_refine(S, max_symbols=args.max_symbols) == pattern_of(sq),
        "dominant": W.is_diagonally_dominant(),
    }
    terms = square_term_values(W.primes)
    X = wspm_square(W)
    n = S.shape[0]
    try:
        checks["decomposable"] = all(
            sum(decompose_terms(X[i, j], terms).values()) == n for i in range(n) for j in range(n)
        )
    except ValueError:
        checks["decomposable"] = False
    _emit({
        "recolored": recolored,
        "symbols": len(W.primes),
        "prime_digits": [len(str(p)) for p in W.primes],
        "checks": checks,
        "passed": all(checks.values()),
    })
    return EXIT_OK if all(checks.values()) else EXIT_INVARIANT


def cmd_validate(args) -> int:
    cfg = CampaignConfig(seed=args.seed, cap=args.cap, trials=args.trials,
                         orbit_cap=min(args.cap, 5), wspm_trials=args.wspm_trials,
                         bliss_dir=args.bliss_dir, engine=args.engine)
    campaigns = args.campaigns.split(",") if args.campaigns else None
    report = validate_corpus(cfg, args.out, figures=args.figures, campaigns=campaigns)
    report["runtime"] = _runtime_echo()
    if args.out:
        report["artifacts"] = sorted(str(p) for p in Path(args.out).iterdir())
    _emit({k: v for k, v in report.items() if k != "counterexamples"} | {
        "counterexamples": len(report["counterexamples"])
    })
    return EXIT_OK if report["passed"] else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blindpsim", description="Blind permutation-similarity testing.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def inputs(p, names):
        for name in names:
            p.add_argument(name, help="matrix or graph file")
        p.add_argument("--format", choices=FORMATS, help="override format detection")

    def bpsay_opts(p):
        p.add_argument("--engine", choices=("exact", "primes"), default="exact")
        p.add_argument("--mix", choices=("diag", "column"), default="diag")
        p.add_argument("--max-iters", type=int, default=None)
        p.add_argument("--equal-edge-weights", action="store_true",
                       help="experimental: weight 1 on row edges too")

    p = sub.add_parser("check", help="decide p-similarity of two inputs")
    inputs(p, ["A", "B"])
    bpsay_opts(p)
    p.add_argument("--direct-sum", action="store_true", help="single direct-sum PCM mode")
    p.add_argument("--trace", metavar="FILE", help="stream one JSON record per iteration")
    p.add_argument("--figures", metavar="DIR", help="write trace.csv and PNG figures here")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("find-perm", help="recover p with A(p,p) = B (1-based output)")
    inputs(p, ["A", "B"])
    bpsay_opts(p)
    p.set_defaults(func=cmd_find_perm)

    p = sub.add_parser("orbits", help="brute-force automorphism orbit partition")
    inputs(p, ["M"])
    p.add_argument("--pcm", action="store_true", help="orbits of the PCM via lifted automorphisms")
    p.add_argument("--symmetric", action="store_true", help="also join (i,j) with (j,i)")
    p.add_argument("--cap", type=int, default=9)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("espp", help="stacked exact-powers pattern")
    inputs(p, ["M"])
    p.add_argument("--cap", type=int, default=30)
    p.set_defaults(func=cmd_espp)

    p = sub.add_parser("wspm-verify", help="widely-spaced primes checks on one matrix")
    inputs(p, ["M"])
    p.add_argument("--max-symbols", type=int, default=6)
    p.set_defaults(func=cmd_wspm_verify)

    p = sub.add_parser("validate", help="seeded oracle campaigns")
    p.add_argument("--cap", type=int, default=5, help="exhaustive graph size cap")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--wspm-trials", type=int, default=20)
    p.add_argument("--engine", choices=("exact", "primes"), default="exact")
    p.add_argument("--campaigns", help="comma-separated subset of campaigns")
    p.add_argument("--bliss-dir", help="directory holding had-sw-32-* graph files")
    p.add_argument("--out", help="directory for report.json, summary.csv, counterexamples")
    p.add_argument("--figures", action="store_true", help="also render PNG figures into --out")
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "figures", False) is True and not getattr(args, "out", None):
        print("error: --figures needs --out", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        # InputFormatError, DimensionError and CapExceededError are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InconclusiveError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (InvariantViolation, CounterexampleError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
