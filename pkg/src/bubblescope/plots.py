"""Matplotlib figures written next to the CLI's TSV outputs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def scaling_plot(rows, path: str | Path) -> Path:
    """Log-log plot of wall time against edge count, one line per pipeline and thread count."""
    fig, ax = plt.subplots(figsize=(5, 4))
    series: dict[tuple[str, int], list] = {}
    for r in rows:
        series.setdefault((r.pipeline, r.threads), []).append((r.edges, r.seconds))
    for (pipeline, threads), pts in sorted(series.items()):
        pts.sort()
        xs, ys = zip(*pts)
        ax.loglog(xs, ys, marker="o", label=f"{pipeline} (t={threads})")
    if rows:
        lo = min(r.edges for r in rows)
        hi = max(r.edges for r in rows)
        ref = min(r.seconds for r in rows)
        ax.loglog([lo, hi], [ref, ref * hi / lo], ls="--", color="grey", label="linear")
    ax.set_xlabel("edges")
    ax.set_ylabel("wall time (s)")
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path


def block_size_histogram(edge_counts, path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 4))
    if edge_counts:
        ax.hist(edge_counts, bins=min(50, max(1, len(set(edge_counts)))), log=True)
    ax.set_xlabel("edges per block")
    ax.set_ylabel("blocks")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path
