"""Seeded validation campaigns comparing the blind method with the oracles.

Campaigns:

``permuted``    BPSAY(A, P A P^T) must be true.
``oracle``      BPSAY verdict equals brute force on exhaustive and random pairs.
``witness``     find_permutation returns a verified permutation.
``orbits``      the stable PCM pattern equals the symmetrized orbit partition.
``wspm``        the widely-spaced primes theorem checks.

Each mismatch is a counterexample: its inputs are written to the output
directory and the report records where.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import corpus
from .bpsay import BpsayConfig, check_psim, pcm_pair
from .findperm import CounterexampleError, apply_perm, find_permutation
from .oracle import brute_psim, pcm_orbits
from .symbols import pattern_of, refines
from .symsqr import refine, stable_pattern
from .wspm import build_wspm, wspm_pair_refine, wspm_square_refine


@dataclass
class CampaignConfig:
    seed: int = 0
    cap: int = 6
    trials: int = 50
    orbit_cap: int = 5
    wspm_trials: int = 20
    bliss_dir: Optional[str] = None
    engine: str = "exact"


@dataclass
class CampaignStats:
    checked: int = 0
    mismatches: int = 0
    seconds: float = 0.0
    notes: list = field(default_factory=list)


class Campaign:
    def __init__(self, cfg: CampaignConfig, out_dir: Optional[Path]):
        self.cfg = cfg
        self.out_dir = Path(out_dir) if out_dir else None
        self.stats: dict[str, CampaignStats] = {}
        self.counterexamples: list[dict] = []
        self.iterations: list[int] = []

    def record(self, name: str, ok: bool, payload: Optional[dict] = None) -> None:
        st = self.stats.setdefault(name, CampaignStats())
        st.checked += 1
        if not ok:
            st.mismatches += 1
            entry = {"campaign": name, **(payload or {})}
            if self.out_dir is not None:
                self.out_dir.mkdir(parents=True, exist_ok=True)
                f = self.out_dir / f"counterexample_{len(self.counterexamples):04d}.json"
                f.write_text(json.dumps(entry, default=_jsonable))
                entry["file"] = str(f)
            self.counterexamples.append(entry)


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    return str(x)


def _pairs_exhaustive(cap: int):
    for n in range(1, cap + 1):
        graphs = corpus.all_graphs(n)
        for a in range(len(graphs)):
            for b in range(a, len(graphs)):
                yield graphs[a], graphs[b]


def run_permuted(c: Campaign, rng) -> None:
    for _ in range(c.cfg.trials):
        m = int(rng.integers(1, c.cfg.cap + 2))
        A = corpus.random_symbol_matrix(m, rng, int(rng.integers(1, 5)))
        B = corpus.permuted_copy(A, corpus.random_permutation(m, rng))
        res = check_psim(A, B, BpsayConfig(engine=c.cfg.engine))
        c.iterations.append(res.iterations)
        c.record("permuted", res.psim, {"A": A, "B": B})


def run_oracle(c: Campaign, rng) -> None:
    bcfg = BpsayConfig(engine=c.cfg.engine)
    for A, B in _pairs_exhaustive(c.cfg.cap):
        if A.shape[0] > 1 and rng.random() < 0.5:
            B = corpus.permuted_copy(B, corpus.random_permutation(B.shape[0], rng))
        truth, _ = brute_psim(A, B)
        res = check_psim(A, B, bcfg)
        c.record("oracle", res.psim == truth, {"A": A, "B": B, "bpsay": res.psim, "brute": truth})
    m = c.cfg.cap + 1
    for _ in range(c.cfg.trials):
        A = corpus.random_graph(m, rng)
        roll = rng.random()
        if roll < 1 / 3:
            B = corpus.permuted_copy(A, corpus.random_permutation(m, rng))
        elif roll < 2 / 3:
            B = corpus.degree_preserving_swaps(A, rng, 2)
        else:
            B = corpus.random_graph(m, rng)
        truth, _ = brute_psim(A, B)
        res = check_psim(A, B, bcfg)
        c.record("oracle", res.psim == truth, {"A": A, "B": B, "bpsay": res.psim, "brute": truth})


def run_witness(c: Campaign, rng) -> None:
    for t in range(c.cfg.trials):
        m = int(rng.integers(1, c.cfg.cap + 3))
        if t % 2:
            A = corpus.random_graph(m, rng)
        else:
            A = corpus.random_symbol_matrix(m, rng, int(rng.integers(1, 5)))
        B = corpus.permuted_copy(A, corpus.random_permutation(m, rng))
        try:
            res = find_permutation(A, B, BpsayConfig(engine=c.cfg.engine))
            ok = res.psim and np.array_equal(apply_perm(A, res.perm), B)
            c.record("witness", ok, {"A": A, "B": B, "perm": res.perm})
        except CounterexampleError as exc:
            c.record("witness", False, {"error": str(exc), **exc.payload})


def run_orbits(c: Campaign, rng) -> None:
    for n in range(1, c.cfg.orbit_cap + 1):
        for G in corpus.all_graphs(n):
            S, _ = pcm_pair(G, G)
            stable, counts = stable_pattern(S)
            c.iterations.append(len(counts))
            ok = pattern_of(stable) == pcm_orbits(G, symmetric=True)
            c.record("orbits", ok, {"G": G})


def run_wspm(c: Campaign, rng) -> None:
    for _ in range(c.cfg.wspm_trials):
        m = int(rng.integers(1, 5))
        M = corpus.random_diag_distinct_symmetric(m, rng, 6)
        W = build_wspm(M)
        (sq,) = refine(M)
        ok1 = refines(wspm_square_refine(W), W.pattern())
        ok2 = np.array_equal(wspm_square_refine(W).diagonal(), pattern_of(sq).diagonal())
        ok3 = wspm_pair_refine(M) == pattern_of(sq)
        c.record("wspm", ok1 and ok2 and ok3, {"M": M, "monotone": ok1, "diag": ok2, "pair": ok3})


def run_bliss(c: Campaign, rng) -> None:
    from .io import parse_input

    root = Path(c.cfg.bliss_dir)
    files = sorted(p for p in root.iterdir() if p.name.startswith("had-sw-32"))
    if len(files) < 2:
        c.stats.setdefault("bliss", CampaignStats()).notes.append("had-sw-32 files not found")
        return
    A = parse_input(files[0]).matrix
    B = parse_input(files[1]).matrix
    res = check_psim(A, B, BpsayConfig(engine="primes"))
    ok = (not res.psim) and res.divergence_iter is not None and res.divergence_iter <= 4
    c.record("bliss", ok, {"files": [str(f) for f in files[:2]], "result": res.to_json()})


CAMPAIGNS = {
    "permuted": run_permuted,
    "oracle": run_oracle,
    "witness": run_witness,
    "orbits": run_orbits,
    "wspm": run_wspm,
}


def validate_corpus(cfg: CampaignConfig | None = None, out_dir=None, figures: bool = False,
                    campaigns=None) -> dict:
    """Run the campaigns and return (and optionally write) the report."""
    cfg = cfg or CampaignConfig()
    camp = Campaign(cfg, out_dir)
    names = list(CAMPAIGNS) if campaigns is None else list(campaigns)
    if cfg.bliss_dir:
        names.append("bliss")
    runners = {**CAMPAIGNS, "bliss": run_bliss}
    for k, name in enumerate(names):
        rng = np.random.default_rng([cfg.seed, k])
        t0 = time.perf_counter()
        runners[name](camp, rng)
        st = camp.stats.setdefault(name, CampaignStats())
        st.seconds = time.perf_counter() - t0
    report = {
        "campaign_id": f"seed{cfg.seed}-cap{cfg.cap}-trials{cfg.trials}",
        "config": asdict(cfg),
        "summary": {k: asdict(v) for k, v in camp.stats.items()},
        "max_iterations": max(camp.iterations, default=0),
        "counterexamples": camp.counterexamples,
        "passed": all(v.mismatches == 0 for v in camp.stats.values()),
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(json.dumps(report, indent=2, default=_jsonable))
        with open(out / "summary.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["campaign", "checked", "mismatches", "seconds"])
            for k, v in camp.stats.items():
                w.writerow([k, v.checked, v.mismatches, f"{v.seconds:.3f}"])
        if figures:
            from .plotting import plot_campaign, plot_iteration_histogram

            plot_campaign(report["summary"], out / "campaigns.png")
            plot_iteration_histogram(camp.iterations, out / "iterations.png")
    return report

