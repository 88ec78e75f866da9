"""Scaling benchmark on synthetic chain-of-blocks graphs."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .oracle import chain_of_blocks
from .snarl_finder import find_all_snarls
from .superbubble_finder import find_all_superbubbles

log = logging.getLogger(__name__)

#: average edges per block produced by :func:`chain_of_blocks` with default block sizes
EDGES_PER_BLOCK = 7.5


@dataclass
class BenchRow:
    pipeline: str
    target: int
    edges: int
    vertices: int
    threads: int
    seconds: float
    build_seconds: float


def fit_exponent(sizes: Sequence[float], seconds: Sequence[float]) -> float:
    """Least-squares slope of log(seconds) against log(size)."""
    if len(sizes) < 2:
        raise ValueError("need at least two sizes to fit an exponent")
    slope, _ = np.polyfit(np.log(np.asarray(sizes, float)), np.log(np.asarray(seconds, float)), 1)
    return float(slope)


def _one(pipeline: str, target: int, seed: int, threads: int) -> BenchRow:
    n_blocks = max(1, round(target / EDGES_PER_BLOCK))
    directed = pipeline == "superbubbles"
    g = chain_of_blocks(n_blocks, seed, directed=directed)
    timings: dict = {}
    t0 = time.perf_counter()
    if directed:
        find_all_superbubbles(g, threads=threads, timings=timings)
        m = g.n_arcs
    else:
        find_all_snarls(g, threads=threads, timings=timings)
        m = g.n_edges
    secs = time.perf_counter() - t0
    log.info("%s %d edges: %.2fs", pipeline, m, secs)
    return BenchRow(pipeline, target, m, g.n_vertices, threads, secs, timings["build"])


def run_scaling(sizes: Sequence[int], seed: int = 0, threads: int = 1, pipelines=("snarls", "superbubbles")) -> list[BenchRow]:
    """Time each pipeline at each size.  With ``threads > 1`` a single-thread baseline is run too."""
    rows = []
    thread_counts = [1, threads] if threads > 1 else [1]
    for pipeline in pipelines:
        for t in thread_counts:
            for target in sizes:
                rows.append(_one(pipeline, target, seed, t))
    return rows
