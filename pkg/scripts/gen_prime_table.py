"""Regenerate the packaged table of widely-spaced prime gaps.

For every chain the wspm tests and the acceptance suite need, search the
smallest prime above each bound and record ``prime - bound`` keyed by a
hash of the bound.  Run from the repository root::

    python3 scripts/gen_prime_table.py
"""

import argparse
import json
import sys
import time
from pathlib import Path

from blindpsim import wspm

OUT = Path(__file__).resolve().parents[1] / "src" / "blindpsim" / "data" / "prime_table.json"


def chains(max_dim: int, pair_symbols: int, single_symbols: int):
    for dim in range(1, max_dim + 1):
        yield dim, single_symbols, None
        for count in range(1, pair_symbols + 1):
            w1 = wspm.widely_spaced_primes(dim, count)
            yield dim, count, dim * w1[-1] ** 2


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-dim", type=int, default=6)
    ap.add_argument("--pair-symbols", type=int, default=6)
    ap.add_argument("--single-symbols", type=int, default=10)
    args = ap.parse_args(argv)
    gaps = {}
    if OUT.exists():
        gaps.update(json.loads(OUT.read_text())["gaps"])
    for dim, count, start in chains(args.max_dim, args.pair_symbols, args.single_symbols):
        bound = dim if start is None else start
        for _ in range(count):
            key = wspm._bound_key(bound)
            if key in gaps:
                p = bound + int(gaps[key])
            else:
                t0 = time.perf_counter()
                p = wspm.search_prime_above(bound)
                gaps[key] = p - bound
                print(f"dim={dim} digits={len(str(p))} gap={p - bound} "
                      f"{time.perf_counter() - t0:.1f}s", flush=True)
                OUT.write_text(json.dumps({"rounds": wspm.PRIMALITY_ROUNDS, "gaps": gaps}, indent=0))
            bound = dim * p * p
    OUT.write_text(json.dumps({"rounds": wspm.PRIMALITY_ROUNDS, "gaps": gaps}, indent=0))
    print(f"{len(gaps)} entries", file=sys.stderr)


if __name__ == "__main__":
    main()
