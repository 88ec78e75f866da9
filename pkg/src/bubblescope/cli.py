"""Command-line front end.

Subcommands: ``snarls``, ``superbubbles``, ``verify``, ``bench`` and
``stats``.  Exit codes are fixed for scripting:

====  ==========================================
0     success
1     input could not be parsed or is unsupported
2     an internal invariant failed
3     input exceeds the brute-force size bound
4     ``verify`` found a mismatch
====  ==========================================
"""

from __future__ import annotations

import argparse
import difflib
import logging
import os
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .gfa_io import (
    CorpusEntry,
    GfaError,
    parse_corpus,
    parse_gfa,
    to_bidirected,
    to_directed,
    write_snarl_pairs,
    write_snarl_report,
    write_superbubbles,
)
from .graph_model import DirectedGraph, double
from .oracle import OracleSizeError, all_snarls_bruteforce, all_superbubbles_bruteforce
from .snarl_finder import enumerate_pairs, find_all_snarls
from .superbubble_finder import find_all_superbubbles

log = logging.getLogger("bubblescope")

EXIT_OK, EXIT_PARSE, EXIT_INVARIANT, EXIT_SIZE, EXIT_MISMATCH = 0, 1, 2, 3, 4
DEFAULT_BENCH_SIZES = (100_000, 200_000, 400_000, 800_000)


@dataclass
class RunConfig:
    subcommand: str
    input: str | None = None
    output: str | None = None
    threads: int = 1
    expand_pairs: bool = False
    double: bool = False
    sizes: tuple[int, ...] = DEFAULT_BENCH_SIZES
    seed: int = 0
    mode: str = "snarls"
    max_vertices: int | None = None

    def __post_init__(self):
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.expand_pairs and self.subcommand != "snarls":
            raise ValueError("--expand-pairs is only valid for the snarls subcommand")


# ---------------------------------------------------------------------------
# I/O helpers


def _read_text(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise GfaError(f"cannot read {path}: {exc.strerror}") from exc


def _write_text(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_text(text)


def _report_timings(io_seconds: float, timings: dict) -> None:
    build = timings.get("build", 0.0)
    algo = timings.get("total", 0.0) - build
    print(f"timing\tBUILD\t{build:.3f}s", file=sys.stderr)
    print(f"timing\tIO+ALGO\t{io_seconds + algo:.3f}s", file=sys.stderr)


@contextmanager
def _stopwatch(acc: list[float]):
    t0 = time.perf_counter()
    try:
        yield
    finally:
        acc[0] += time.perf_counter() - t0


# ---------------------------------------------------------------------------
# subcommands


def run_snarls(cfg: RunConfig) -> int:
    io_t = [0.0]
    with _stopwatch(io_t):
        g = to_bidirected(parse_gfa(_read_text(cfg.input)))
    timings: dict = {}
    rep = find_all_snarls(g, threads=cfg.threads, timings=timings)
    with _stopwatch(io_t):
        if cfg.expand_pairs:
            log.warning("--expand-pairs output can be quadratic in the graph size")
            text = write_snarl_pairs(enumerate_pairs(rep), g.names)
        else:
            text = write_snarl_report(rep, g.names)
        _write_text(cfg.output, text)
    _report_timings(io_t[0], timings)
    return EXIT_OK


def _load_directed(text: str, use_double: bool) -> DirectedGraph:
    doc = parse_gfa(text)
    if use_double:
        return double(to_bidirected(doc))
    return to_directed(doc)


def run_superbubbles(cfg: RunConfig) -> int:
    io_t = [0.0]
    with _stopwatch(io_t):
        g = _load_directed(_read_text(cfg.input), cfg.double)
    timings: dict = {}
    bubbles = find_all_superbubbles(g, threads=cfg.threads, timings=timings)
    with _stopwatch(io_t):
        _write_text(cfg.output, write_superbubbles(bubbles, g.names))
    _report_timings(io_t[0], timings)
    return EXIT_OK


def _diff(expected: str, actual: str, label: str) -> str:
    lines = difflib.unified_diff(
        expected.splitlines(keepends=True),
        actual.splitlines(keepends=True),
        fromfile=f"{label} (expected)",
        tofile=f"{label} (computed)",
    )
    return "".join(lines)


def _oracle_text(g, kind: str, bound: int | None) -> str:
    if kind == "snarls":
        return write_snarl_pairs((tuple(sorted(p)) for p in all_snarls_bruteforce(g, bound)), g.names)
    return write_superbubbles(all_superbubbles_bruteforce(g, bound), g.names)


def _fast_text(g, kind: str, threads: int, expanded: bool) -> str:
    if kind == "snarls":
        rep = find_all_snarls(g, threads=threads)
        return write_snarl_pairs(enumerate_pairs(rep), g.names) if expanded else write_snarl_report(rep, g.names)
    return write_superbubbles(find_all_superbubbles(g, threads=threads), g.names)


def _verify_graph(name: str, g, kind: str, cfg: RunConfig, expected: str | None = None) -> list[str]:
    """Diffs (empty when everything agrees) for one graph and one structure kind."""
    problems = []
    fast = _fast_text(g, kind, cfg.threads, expanded=True)
    oracle = _oracle_text(g, kind, cfg.max_vertices)
    if fast != oracle:
        problems.append(_diff(oracle, fast, f"{name}:{kind} oracle"))
    if expected is not None:
        report = _fast_text(g, kind, cfg.threads, expanded=False)
        if report != expected:
            problems.append(_diff(expected, report, f"{name}:{kind} pinned"))
    return problems


def _corpus_jobs(entries: list[CorpusEntry]):
    for ent in entries:
        kinds = ["superbubbles"] if ent.directed else ["snarls"]
        for k in ent.expect:
            if k not in kinds:
                raise GfaError(f"graph {ent.name}: @expect {k} does not fit a {'directed' if ent.directed else 'bidirected'} graph", ent.line)
        for k in kinds:
            yield ent.name, ent.graph, k, ent.expect.get(k)


def _is_corpus(text: str) -> bool:
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            return line.startswith("@graph")
    return False


def run_verify(cfg: RunConfig) -> int:
    text = _read_text(cfg.input)
    if _is_corpus(text):
        jobs = list(_corpus_jobs(parse_corpus(text)))
    else:
        doc = parse_gfa(text)
        if cfg.mode == "snarls":
            jobs = [("input", to_bidirected(doc), "snarls", None)]
        else:
            g = double(to_bidirected(doc)) if cfg.double else to_directed(doc)
            jobs = [("input", g, "superbubbles", None)]
    failures = 0
    for name, g, kind, expected in jobs:
        problems = _verify_graph(name, g, kind, cfg, expected)
        status = "ok" if not problems else "MISMATCH"
        print(f"{name}\t{kind}\t{status}")
        for p in problems:
            sys.stdout.write(p)
        failures += bool(problems)
    print(f"verified {len(jobs) - failures}/{len(jobs)}")
    return EXIT_MISMATCH if failures else EXIT_OK


def run_stats(cfg: RunConfig) -> int:
    """Per-block decomposition statistics as TSV, plus a histogram PNG next to a file output."""
    from .connectivity import LOOP, block_cut_tree, sign_cut_graphs
    from .graph_model import underlying
    from .spqr import build_spqr

    g = to_bidirected(parse_gfa(_read_text(cfg.input)))
    g = g.without_self_loops()
    bct = block_cut_tree(underlying(g))
    rows = [("block", "kind", "vertices", "edges", "S", "P", "R")]
    for bid, blk in enumerate(bct.blocks):
        if blk.kind == LOOP:
            continue
        kinds = {"S": 0, "P": 0, "R": 0}
        if not blk.is_multibridge:
            sub, _ = bct.graph.subgraph(blk.edges)
            for node in build_spqr(sub).nodes:
                kinds[node.kind] += 1
        rows.append((bid, blk.kind, len(blk.vertices), len(blk.edges), kinds["S"], kinds["P"], kinds["R"]))
    text = "".join("\t".join(map(str, r)) + "\n" for r in rows)
    _write_text(cfg.output, text)
    n_scg = sum(1 for s in sign_cut_graphs(g, bct) if not s.isolated)
    print(
        f"vertices\t{g.n_vertices}\nedges\t{g.n_edges}\nblocks\t{len(rows) - 1}\n"
        f"cutvertices\t{len(bct.cutvertices)}\nsign_cut_graphs\t{n_scg}",
        file=sys.stderr,
    )
    if cfg.output not in (None, "-"):
        from .plots import block_size_histogram

        block_size_histogram([r[3] for r in rows[1:]], Path(cfg.output).with_suffix(".png"))
    return EXIT_OK


def run_bench(cfg: RunConfig) -> int:
    from .bench import fit_exponent, run_scaling
    from .plots import scaling_plot

    rows = run_scaling(cfg.sizes, seed=cfg.seed, threads=cfg.threads)
    header = "pipeline\ttarget_edges\tedges\tvertices\tthreads\tseconds\tbuild_seconds\n"
    body = "".join(
        f"{r.pipeline}\t{r.target}\t{r.edges}\t{r.vertices}\t{r.threads}\t{r.seconds:.4f}\t{r.build_seconds:.4f}\n"
        for r in rows
    )
    out = cfg.output or "bench.tsv"
    _write_text(out, header + body)
    for pipeline in ("snarls", "superbubbles"):
        sel = [r for r in rows if r.pipeline == pipeline and r.threads == cfg.threads]
        k = fit_exponent([r.edges for r in sel], [r.seconds for r in sel])
        verdict = "PASS" if k <= 1.3 else "FAIL"
        print(f"exponent\t{pipeline}\t{k:.3f}\t{verdict}", file=sys.stderr)
        if cfg.threads > 1:
            base = [r for r in rows if r.pipeline == pipeline and r.threads == 1]
            for a, b in zip(base, sel):
                print(f"speedup\t{pipeline}\t{a.edges}\t{a.seconds / b.seconds:.2f}x", file=sys.stderr)
    if out != "-":
        scaling_plot(rows, Path(out).with_suffix(".png"))
    return EXIT_OK


COMMANDS = {
    "snarls": run_snarls,
    "superbubbles": run_superbubbles,
    "verify": run_verify,
    "bench": run_bench,
    "stats": run_stats,
}


# ---------------------------------------------------------------------------
# argument parsing


def _sizes(text: str) -> tuple[int, ...]:
    """``"1000"`` expands to n, 2n, 4n, 8n; a comma list is taken verbatim."""
    try:
        vals = [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from exc
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("sizes must be positive")
    if len(vals) == 1:
        vals = [vals[0] * f for f in (1, 2, 4, 8)]
    return tuple(vals)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bubblescope", description="Snarls and superbubbles of GFA graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, output_help="output path (default: stdout)"):
        sp.add_argument("-i", "--input", help="input GFA (default: stdin)")
        sp.add_argument("-o", "--output", help=output_help)
        sp.add_argument("-t", "--threads", type=_positive, default=1)

    sp = sub.add_parser("snarls", help="snarl representation of a bidirected GFA")
    common(sp)
    sp.add_argument("--expand-pairs", action="store_true", help="list every snarl pair (may be quadratic)")

    sp = sub.add_parser("superbubbles", help="superbubbles of a directed GFA")
    common(sp)
    sp.add_argument("--double", action="store_true", help="run on the doubled graph of a bidirected GFA")

    sp = sub.add_parser("verify", help="compare against the brute-force oracle")
    common(sp)
    sp.add_argument("--mode", choices=("snarls", "superbubbles"), default="snarls", help="structure for GFA input")
    sp.add_argument("--double", action="store_true")
    sp.add_argument("--max-vertices", type=_positive, default=None, help="oracle size bound (default 12)")

    sp = sub.add_parser("bench", help="scaling benchmark on chain-of-blocks graphs")
    sp.add_argument("-o", "--output", help="TSV path; a PNG plot is written next to it (default: bench.tsv)")
    sp.add_argument("-t", "--threads", type=_positive, default=1)
    sp.add_argument("--sizes", type=_sizes, default=DEFAULT_BENCH_SIZES, help="edge counts, or one n for n,2n,4n,8n")

    sp = sub.add_parser("stats", help="block and SPQR statistics of a GFA")
    common(sp, "TSV path; a histogram PNG is written next to it (default: stdout, no plot)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = RunConfig(
            subcommand=args.subcommand,
            input=getattr(args, "input", None),
            output=args.output,
            threads=args.threads,
            expand_pairs=getattr(args, "expand_pairs", False),
            double=getattr(args, "double", False),
            sizes=getattr(args, "sizes", DEFAULT_BENCH_SIZES),
            seed=int(os.environ.get("BUBBLESCOPE_SEED", "0")),
            mode=getattr(args, "mode", "snarls"),
            max_vertices=getattr(args, "max_vertices", None),
        )
        return COMMANDS[cfg.subcommand](cfg)
    except GfaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OracleSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (AssertionError, RuntimeError, ValueError, KeyError, IndexError) as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
