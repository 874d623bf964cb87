"""Matplotlib figures for traces and patterns, rendered straight to files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .symbols import pattern_of  # noqa: E402


def plot_trajectory(trace, path, title: str = "symbol count per squaring") -> Path:
    """Distinct-symbol counts of S and T against the iteration number."""
    path = Path(path)
    its = [r.iteration for r in trace]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(its, [r.symbols_S for r in trace], marker="o", label="S")
    ax.plot(its, [r.symbols_T for r in trace], marker="x", linestyle="--", label="T")
    for r in trace:
        if not r.mixes_equal:
            ax.axvline(r.iteration, color="tab:red", alpha=0.4)
    ax.set_xlabel("squaring")
    ax.set_ylabel("distinct symbols")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_pattern(M, path, title: str = "pattern") -> Path:
    """Heatmap of a matrix's cells, colored by canonical cell index."""
    path = Path(path)
    cells = pattern_of(np.asarray(M)).cell_of
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.imshow(cells, cmap="nipy_spectral", interpolation="nearest")
    ax.set_title(f"{title} ({int(cells.max()) + 1 if cells.size else 0} cells)")
    ax.set_xticks([])
    ax.set_yticks([])
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_campaign(summary: dict, path) -> Path:
    """Bar chart of checks and mismatches per validation campaign."""
    path = Path(path)
    names = list(summary)
    checks = [summary[k]["checked"] for k in names]
    bad = [summary[k]["mismatches"] for k in names]
    x = np.arange(len(names))
    fig, ax = plt.subplots(figsize=(6, 3.2))
    ax.bar(x - 0.2, checks, width=0.4, label="checked")
    ax.bar(x + 0.2, bad, width=0.4, label="mismatches", color="tab:red")
    ax.set_xticks(x)
    ax.set_xticklabels(names, rotation=20, ha="right")
    ax.set_yscale("symlog")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_iteration_histogram(iterations, path) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    if len(iterations):
        bins = np.arange(0.5, max(iterations) + 1.5)
        ax.hist(iterations, bins=bins)
    ax.set_xlabel("squarings to stability")
    ax.set_ylabel("PCMs")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
