"""Linear-size representation of all snarls of a bidirected graph.

The representation consists of *tip sets*, where every two incidences of a
set form a snarl, plus a list of explicit snarl pairs.  The tip sets come
from the sign-cut graphs; the explicit pairs are found block by block on
SPQR trees.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from .connectivity import LOOP, BlockCutTree, block_cut_tree, sign_cut_partition
from .graph_model import BidirectedGraph, Incidence, Sign, underlying
from .spqr import P_NODE, R_NODE, S_NODE, SpqrTree, build_spqr

PLUS, MINUS = Sign.PLUS, Sign.MINUS
Pair = tuple[Incidence, Incidence]


def _pair(a: Incidence, b: Incidence) -> Pair:
    return (a, b) if a <= b else (b, a)


@dataclass
class SnarlRepresentation:
    """Tip sets plus explicit pairs; both use vertex ids of the input graph."""

    tip_sets: list[tuple[Incidence, ...]] = field(default_factory=list)
    pairs: list[Pair] = field(default_factory=list)

    def __len__(self) -> int:
        return sum(len(t) * (len(t) - 1) // 2 for t in self.tip_sets) + len(self.pairs)


def enumerate_pairs(rep: SnarlRepresentation) -> Iterator[Pair]:
    """Every snarl encoded by ``rep``; tip sets expand to all their 2-subsets."""
    for ts in rep.tip_sets:
        for a, b in itertools.combinations(ts, 2):
            yield _pair(a, b)
    yield from rep.pairs


def snarl_set(rep: SnarlRepresentation) -> set[frozenset[Incidence]]:
    return {frozenset(p) for p in enumerate_pairs(rep)}


# ---------------------------------------------------------------------------
# per-graph context


class _Context:
    """Everything the block routines need to know about the ambient graph."""

    def __init__(self, g: BidirectedGraph):
        self.g = g
        self.h = underlying(g)
        self.bct: BlockCutTree = block_cut_tree(self.h)
        groups, masks, consistent = sign_cut_partition(g, self.bct)
        self.groups = groups
        self.masks = masks
        self.consistent = consistent
        n = g.n_vertices
        self.deg = [len(g._inc[i]) for i in range(2 * n)]
        # number of blocks at v with both signs at v
        self.mixed = [0] * n
        for (b, v), m in masks.items():
            if m == 3:
                self.mixed[v] += 1
        self.group_of = [-1] * len(self.bct.blocks)
        for gi, bl in enumerate(groups):
            for b in bl:
                self.group_of[b] = gi

    def count_f(self, gi: int, v: int, s: int) -> int:
        """Incidences of sign ``s`` at ``v`` inside sign-cut graph ``gi``."""
        if v in self.consistent:
            b = self._some_block(gi, v)
            return self.deg[2 * v + s] if self.masks[(b, v)] - 1 == s else 0
        return self.deg[2 * v + s]

    def _some_block(self, gi: int, v: int) -> int:
        for b in self.bct.vertex_blocks[v]:
            if self.group_of[b] == gi:
                return b
        raise KeyError(v)

    def is_tip_f(self, gi: int, v: int) -> bool:
        if v in self.consistent:
            return True
        return (self.deg[2 * v] > 0) != (self.deg[2 * v + 1] > 0)

    def has_dangling(self, block: int, v: int) -> bool:
        """A block other than ``block`` has incidences of both signs at ``v``."""
        if v in self.consistent:
            return False
        k = self.mixed[v]
        if k and self.masks.get((block, v)) == 3:
            k -= 1
        return k > 0

    def tips_of(self, gi: int) -> tuple[Incidence, ...]:
        verts: set[int] = set()
        for b in self.groups[gi]:
            verts.update(self.bct.blocks[b].vertices)
        out = []
        for v in verts:
            if not self.is_tip_f(gi, v):
                continue
            s = PLUS if self.count_f(gi, v, PLUS) else MINUS
            out.append(Incidence(v, s))
        out.sort()
        return tuple(out)


def has_dangling(g: BidirectedGraph, block_edges, v: int) -> bool:
    """Standalone dangling-block test for vertex ``v`` and the block holding ``block_edges``.

    ``block_edges`` is any non-empty collection of edge ids of one block of
    ``g`` (self-loops removed).
    """
    ctx = _Context(g.without_self_loops())
    b = ctx.bct.edge_block[next(iter(block_edges))]
    return ctx.has_dangling(b, v)


# ---------------------------------------------------------------------------
# incidence counts per skeleton edge


@dataclass
class IncidenceCounts:
    """``plus[x][0]`` is the number of ``+`` incidences at ``sk_u[x]`` inside
    the expansion of skeleton edge ``x``; index 1 refers to ``sk_v[x]``.
    """

    plus: list[list[int]]
    minus: list[list[int]]

    def at(self, t: SpqrTree, x: int, w: int, s: int) -> int:
        side = 0 if t.sk_u[x] == w else 1
        return (self.plus if s == PLUS else self.minus)[x][side]


def incidence_counts(t: SpqrTree, end_signs: list[tuple[int, int]], total: list[int]) -> IncidenceCounts:
    """Bottom-up then complement pass over the tree.

    ``end_signs[i]`` holds the signs at ``eu[i]`` and ``ev[i]`` of edge ``i``
    of ``t.graph``; ``total[2w+s]`` is the block-wide count at ``w``.
    """
    ns = len(t.sk_u)
    plus = [[0, 0] for _ in range(ns)]
    minus = [[0, 0] for _ in range(ns)]
    geu = t.graph.eu
    for x in range(ns):
        r = t.sk_real[x]
        if r < 0:
            continue
        su, sv = end_signs[r]
        if geu[r] != t.sk_u[x]:
            su, sv = sv, su
        (plus if su == PLUS else minus)[x][0] += 1
        (plus if sv == PLUS else minus)[x][1] += 1
    sk_u, sk_v, twin = t.sk_u, t.sk_v, t.sk_twin
    for mu in reversed(t.order):
        node = t.nodes[mu]
        if node.parent < 0:
            continue
        pe = node.parent_edge
        tw = twin[pe]
        a, b = sk_u[tw], sk_v[tw]
        acc = [0, 0, 0, 0]  # a+, a-, b+, b-
        for y in node.edges:
            if y == pe:
                continue
            yu, yv = sk_u[y], sk_v[y]
            py, my = plus[y], minus[y]
            if yu == a:
                acc[0] += py[0]
                acc[1] += my[0]
            elif yu == b:
                acc[2] += py[0]
                acc[3] += my[0]
            if yv == a:
                acc[0] += py[1]
                acc[1] += my[1]
            elif yv == b:
                acc[2] += py[1]
                acc[3] += my[1]
        plus[tw][0], minus[tw][0], plus[tw][1], minus[tw][1] = acc
    for mu in t.order:
        node = t.nodes[mu]
        if node.parent < 0:
            continue
        pe = node.parent_edge
        tw = twin[pe]
        for side in (0, 1):
            w = sk_u[pe] if side == 0 else sk_v[pe]
            tside = 0 if sk_u[tw] == w else 1
            plus[pe][side] = total[2 * w] - plus[tw][tside]
            minus[pe][side] = total[2 * w + 1] - minus[tw][tside]
    return IncidenceCounts(plus, minus)


# ---------------------------------------------------------------------------
# block routines


@dataclass
class _Block:
    """A 2-connected block with its SPQR tree and local-to-global maps."""

    ctx: _Context
    bid: int
    gi: int
    tree: SpqrTree
    back: list[int]
    #: ``total[2w+s]``: incidences of sign ``s`` at local vertex ``w`` in the block
    total: list[int]
    counts: IncidenceCounts
    good: dict[int, set[int]] = field(default_factory=dict)

    def skip(self, w: int) -> bool:
        v = self.back[w]
        return self.ctx.is_tip_f(self.gi, v) or self.ctx.has_dangling(self.bid, v)

    def c(self, x: int, w: int, s: int) -> int:
        return self.counts.at(self.tree, x, w, s)

    def inc(self, w: int, s: int) -> Incidence:
        return Incidence(self.back[w], Sign(s))


def find_snarls_in_S(blk: _Block) -> list[Pair]:
    """Pairs of consecutive good vertices around each S-node cycle."""
    t = blk.tree
    out: list[Pair] = []
    for mu, node in enumerate(t.nodes):
        if node.kind != S_NODE:
            continue
        cyc, edges = node.cycle, node.edges
        k = len(cyc)
        w_list: list[tuple[Incidence, Incidence]] = []  # (left incidence, right incidence)
        good: set[int] = set()
        for i in range(k):
            w = cyc[i]
            if blk.skip(w):
                continue
            left, right = edges[i - 1], edges[i]
            lp, lm = blk.c(left, w, PLUS), blk.c(left, w, MINUS)
            rp, rm = blk.c(right, w, PLUS), blk.c(right, w, MINUS)
            if lp and not lm and rm and not rp:
                w_list.append((blk.inc(w, PLUS), blk.inc(w, MINUS)))
            elif lm and not lp and rp and not rm:
                w_list.append((blk.inc(w, MINUS), blk.inc(w, PLUS)))
            else:
                continue
            good.add(w)
        blk.good[mu] = good
        q = len(w_list)
        if q < 2:
            continue
        for j in range(q):
            out.append(_pair(w_list[j][1], w_list[(j + 1) % q][0]))
    return out


def find_snarls_in_P(blk: _Block) -> list[Pair]:
    """Separable sign assignments on the two poles of every P-node.

    Needs :func:`find_snarls_in_S` to have filled ``blk.good``.
    """
    t = blk.tree
    out: list[Pair] = []
    for node in t.nodes:
        if node.kind != P_NODE:
            continue
        x0 = node.edges[0]
        u, v = t.sk_u[x0], t.sk_v[x0]
        if blk.skip(u) or blk.skip(v):
            continue
        sets = {}
        for w in (u, v):
            for s in (PLUS, MINUS):
                sets[(w, s)] = frozenset(x for x in node.edges if blk.c(x, w, s))

        def allowed(es: frozenset[int]) -> bool:
            if len(es) != 1:
                return True
            (x,) = es
            if not t.is_virtual(x):
                return True
            beta = t.pertaining(x)
            if t.nodes[beta].kind != S_NODE:
                return True
            return not (blk.good.get(beta, set()) - {u, v})

        for du in (PLUS, MINUS):
            for dv in (PLUS, MINUS):
                eu_d, eu_h = sets[(u, du)], sets[(u, du.opposite)]
                ev_d, ev_h = sets[(v, dv)], sets[(v, dv.opposite)]
                if not eu_d or eu_d & eu_h or ev_d & ev_h or eu_d != ev_d:
                    continue
                if allowed(eu_d):
                    out.append(_pair(blk.inc(u, du), blk.inc(v, dv)))
                if allowed(eu_h):
                    out.append(_pair(blk.inc(u, du.opposite), blk.inc(v, dv.opposite)))
    return out


def find_snarls_between_RR(blk: _Block) -> list[Pair]:
    """Tree edges joining two R-nodes whose sides split the pole signs cleanly."""
    t = blk.tree
    out: list[Pair] = []
    for p, ch, pe, ce in t.tree_edges():
        if t.nodes[p].kind != R_NODE or t.nodes[ch].kind != R_NODE:
            continue
        u, v = t.sk_u[pe], t.sk_v[pe]
        # HasDangling is checked at both poles
        if blk.skip(u) or blk.skip(v):
            continue
        for du in (PLUS, MINUS):
            for dv in (PLUS, MINUS):
                # pe's expansion is the child side, ce's the parent side
                if (
                    blk.c(ce, u, du) == 0
                    and blk.c(pe, u, du.opposite) == 0
                    and blk.c(ce, v, dv) == 0
                    and blk.c(pe, v, dv.opposite) == 0
                ):
                    out.append(_pair(blk.inc(u, du), blk.inc(v, dv)))
                    out.append(_pair(blk.inc(u, du.opposite), blk.inc(v, dv.opposite)))
    return out


def find_edge_snarls(blk: _Block) -> list[Pair]:
    """Snarls whose two vertices are joined by an edge of the block.

    The edge ``{u du, v dv}`` qualifies when it is the only block edge with
    sign ``du`` at ``u`` and ``dv`` at ``v``; the mirrored pair is added
    when no S-node holds both ``u`` and ``v``.
    """
    t = blk.tree
    g = blk.ctx.g
    p_near_s = {}
    for mu, node in enumerate(t.nodes):
        if node.kind == P_NODE:
            p_near_s[mu] = any(t.is_virtual(x) and t.nodes[t.pertaining(x)].kind == S_NODE for x in node.edges)
    out: list[Pair] = []
    hsrc = t.graph.source_ids
    geu, gev = t.graph.eu, t.graph.ev
    for x, r in enumerate(t.sk_real):
        if r < 0:
            continue
        a, b = g.edges[hsrc[r]]
        wa, wb = geu[r], gev[r]
        if blk.total[2 * wa + a.sign] != 1 or blk.total[2 * wb + b.sign] != 1:
            continue
        if blk.skip(wa) or blk.skip(wb):
            continue
        out.append(_pair(a, b))
        mu = t.sk_node[x]
        kind = t.nodes[mu].kind
        in_s = kind == S_NODE or (kind == P_NODE and p_near_s[mu])
        if not in_s:
            out.append(_pair(a.opposite, b.opposite))
    return out


def _multibridge_pairs(ctx: _Context, bid: int, gi: int) -> list[Pair]:
    """Edge test on a two-vertex block, with the same local reading as :func:`find_edge_snarls`."""
    g = ctx.g
    edges = ctx.bct.blocks[bid].edges
    cnt: dict[Incidence, int] = {}
    for e in edges:
        for i in g.edges[e]:
            cnt[i] = cnt.get(i, 0) + 1
    out = []
    for e in edges:
        a, b = g.edges[e]
        if cnt[a] != 1 or cnt[b] != 1:
            continue
        if any(ctx.is_tip_f(gi, w) or ctx.has_dangling(bid, w) for w in (a.vertex, b.vertex)):
            continue
        out.append(_pair(a, b))
    return out


# ---------------------------------------------------------------------------
# driver


def _block_pairs(ctx: _Context, bid: int) -> tuple[list[Pair], float]:
    """Explicit pairs of one block and the seconds spent building its SPQR tree."""
    block = ctx.bct.blocks[bid]
    gi = ctx.group_of[bid]
    g = ctx.g
    if block.is_multibridge:
        return _multibridge_pairs(ctx, bid, gi), 0.0
    t0 = time.perf_counter()
    sub, back = ctx.h.subgraph(block.edges)
    tree = build_spqr(sub)
    built = time.perf_counter() - t0
    end_signs = []
    total = [0] * (2 * sub.n)
    for i, e in enumerate(block.edges):
        a, b = g.edges[e]
        end_signs.append((a.sign, b.sign))
        total[2 * sub.eu[i] + a.sign] += 1
        total[2 * sub.ev[i] + b.sign] += 1
    blk = _Block(ctx, bid, gi, tree, back, total, incidence_counts(tree, end_signs, total))
    out = find_snarls_in_S(blk)
    out += find_snarls_in_P(blk)
    out += find_snarls_between_RR(blk)
    out += find_edge_snarls(blk)
    return out, built


def find_all_snarls(g: BidirectedGraph, threads: int = 1, timings: dict | None = None) -> SnarlRepresentation:
    """Tip sets of all sign-cut graphs plus the explicit snarls of every block.

    Self-loops are ignored.  With ``threads > 1`` blocks are processed by a
    thread pool; the result does not depend on the thread count.  If
    ``timings`` is given, ``"build"`` (block-cut and SPQR trees, summed over
    workers) and ``"total"`` seconds are added to it.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    start = time.perf_counter()
    g = g.without_self_loops()
    t0 = time.perf_counter()
    ctx = _Context(g)
    build = time.perf_counter() - t0
    tip_sets = [ctx.tips_of(gi) for gi in range(len(ctx.groups))]
    bids = [b for b, blk in enumerate(ctx.bct.blocks) if blk.kind != LOOP]
    if threads > 1 and len(bids) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda b: _block_pairs(ctx, b), bids))
    else:
        results = [_block_pairs(ctx, b) for b in bids]
    pairs: set[Pair] = set()
    build += sum(r[1] for r in results)
    for bid, (res, _) in zip(bids, results):
        gi = ctx.group_of[bid]
        for p in res:
            # pairs touching a tip are either covered by the tip set or not snarls
            if ctx.is_tip_f(gi, p[0].vertex) or ctx.is_tip_f(gi, p[1].vertex):
                continue
            pairs.add(p)
    tip_sets = [ts for ts in tip_sets if ts]
    tip_sets.sort()
    rep = SnarlRepresentation(tip_sets, sorted(pairs))
    _add_timings(timings, build, time.perf_counter() - start)
    return rep


def _add_timings(timings: dict | None, build: float, total: float) -> None:
    if timings is not None:
        timings["build"] = timings.get("build", 0.0) + build
        timings["total"] = timings.get("total", 0.0) + total
