"""Enumeration of all superbubbles of a directed graph.

Every superbubble lives inside one block of the underlying undirected graph.
Inside a 2-connected block the candidates are separation pairs, so the
search walks the block's SPQR tree.  Each virtual skeleton edge carries an
:class:`EdgeState` summarizing its expansion: whether the expansion holds an
extremity strictly inside, whether it is acyclic and, if so, which pole
reaches the other.  States pointing away from the root come from a
bottom-up pass (:meth:`BlockAnalysis.phase1`), the others from a top-down
pass (:meth:`BlockAnalysis.phase2`).  :meth:`BlockAnalysis.phase3` then
reads superbubbles off P-nodes and R-node boundaries.
"""

from __future__ import annotations

import enum
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .connectivity import LOOP, block_cut_tree
from .graph_model import DirectedGraph, Sign, underlying_directed
from .snarl_finder import incidence_counts
from .spqr import P_NODE, R_NODE, S_NODE, SpqrTree, build_spqr

OUT, IN = Sign.PLUS, Sign.MINUS


class TriState(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    NULL = "null"

    @classmethod
    def of(cls, value: bool | None) -> "TriState":
        if value is None:
            return cls.NULL
        return cls.TRUE if value else cls.FALSE


@dataclass(frozen=True)
class EdgeState:
    """Summary of the expansion of one skeleton edge with poles ``boundary``.

    ``reaches_st`` refers to ``boundary[0]`` reaching ``boundary[1]``.
    """

    boundary: tuple[int, int]
    no_extremity: bool
    acyclic: TriState
    reaches_st: TriState
    reaches_ts: TriState


@dataclass(frozen=True, order=True)
class Superbubble:
    entrance: int
    exit: int


# ---------------------------------------------------------------------------
# feedback arcs


class Acyclic:
    """Marker result of :func:`feedback_arcs` for graphs without cycles."""

    def __repr__(self) -> str:
        return "Acyclic()"

    def __eq__(self, other) -> bool:
        return isinstance(other, Acyclic)

    def __hash__(self) -> int:
        return 0


@dataclass(frozen=True)
class Hitters:
    """Arc ids lying on every cycle (possibly none)."""

    arcs: frozenset[int]


def _topo_order(n: int, tails: Sequence[int], heads: Sequence[int], skip: set[int] | frozenset = frozenset()):
    """Kahn's algorithm; returns the order or ``None`` if there is a cycle."""
    indeg = [0] * n
    out: list[list[int]] = [[] for _ in range(n)]
    for a, (u, v) in enumerate(zip(tails, heads)):
        if a in skip:
            continue
        out[u].append(v)
        indeg[v] += 1
    order = [v for v in range(n) if indeg[v] == 0]
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        for v in out[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                order.append(v)
    return order if len(order) == n else None


def _nontrivial_sccs(n: int, tails: Sequence[int], heads: Sequence[int]) -> list[list[int]]:
    """Strongly connected components with at least two vertices (iterative Tarjan)."""
    out: list[list[int]] = [[] for _ in range(n)]
    for u, v in zip(tails, heads):
        out[u].append(v)
    index = [-1] * n
    low = [0] * n
    on = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for r in range(n):
        if index[r] >= 0:
            continue
        work = [(r, 0)]
        index[r] = low[r] = counter
        counter += 1
        stack.append(r)
        on[r] = True
        while work:
            v, i = work[-1]
            if i < len(out[v]):
                work[-1] = (v, i + 1)
                w = out[v][i]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on[w] = True
                    work.append((w, 0))
                elif on[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                work.pop()
                if work:
                    p = work[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    if len(comp) > 1:
                        comps.append(comp)
    return comps


def _feedback_arc_ids(n: int, tails: Sequence[int], heads: Sequence[int]) -> frozenset[int] | None:
    """Arcs on every cycle, ``None`` if acyclic.  Parallel arcs are allowed.

    Pick one cycle ``C`` and remove its arcs.  Only arcs of ``C`` can be on
    every cycle, so if a cycle survives the removal the answer is empty.
    Otherwise the rest is a DAG, and arc ``i`` of ``C`` is avoidable exactly when some path of the DAG jumps from a ``C`` vertex
    ``a`` to a ``C`` vertex ``b`` with ``i`` outside the ``C`` segment from
    ``b`` to ``a``.  Those segments are marked with a difference array.
    """
    if _topo_order(n, tails, heads) is not None:
        return None
    sccs = _nontrivial_sccs(n, tails, heads)
    if len(sccs) != 1:
        return frozenset()
    comp = set(sccs[0])
    out_arcs: list[list[int]] = [[] for _ in range(n)]
    for a, u in enumerate(tails):
        if u in comp and heads[a] in comp:
            out_arcs[u].append(a)
    # walk inside the component until a vertex repeats
    seen_at: dict[int, int] = {}
    walk_v: list[int] = []
    walk_a: list[int] = []
    v = sccs[0][0]
    while v not in seen_at:
        seen_at[v] = len(walk_v)
        walk_v.append(v)
        a = out_arcs[v][0]
        walk_a.append(a)
        v = heads[a]
    start = seen_at[v]
    cyc_v = walk_v[start:]
    cyc_a = walk_a[start:]
    k = len(cyc_v)
    cyc_set = frozenset(cyc_a)
    order = _topo_order(n, tails, heads, cyc_set)
    if order is None:
        return frozenset()
    pos = [-1] * n
    for i, w in enumerate(cyc_v):
        pos[w] = i
    succ: list[list[int]] = [[] for _ in range(n)]
    pred: list[list[int]] = [[] for _ in range(n)]
    for a, (u, w) in enumerate(zip(tails, heads)):
        if a not in cyc_set:
            succ[u].append(w)
            pred[w].append(u)
    NEG, BIG = -1, k
    max_r = [NEG] * n
    min_r = [BIG] * n
    for u in reversed(order):
        mx, mn = NEG, BIG
        for w in succ[u]:
            pw = pos[w]
            cand_max = max(pw, max_r[w])
            if cand_max > mx:
                mx = cand_max
            cand_min = min_r[w]
            if pw >= 0 and pw < cand_min:
                cand_min = pw
            if cand_min < mn:
                mn = cand_min
        max_r[u], min_r[u] = mx, mn
    max_co = [NEG] * n
    for u in order:
        mx = NEG
        for w in pred[u]:
            cand = max(pos[w], max_co[w])
            if cand > mx:
                mx = cand
        max_co[u] = mx
    diff = [0] * (k + 1)
    a_min = k
    b_max = 0
    for i, w in enumerate(cyc_v):
        if max_r[w] > i:
            diff[i] += 1
            diff[max_r[w]] -= 1
        if min_r[w] < i and i < a_min:
            a_min = i
        if max_co[w] > i and i > b_max:
            b_max = i
    hitters = []
    run = 0
    for i in range(k):
        run += diff[i]
        if run == 0 and i < a_min and i >= b_max:
            hitters.append(cyc_a[i])
    return frozenset(hitters)


def feedback_arcs(g: DirectedGraph) -> Acyclic | Hitters:
    """Arcs (by id) contained in every cycle of ``g``."""
    res = _feedback_arc_ids(g.n_vertices, g.tails, g.heads)
    return Acyclic() if res is None else Hitters(res)


# ---------------------------------------------------------------------------
# graph-wide context


class _Context:
    def __init__(self, g: DirectedGraph):
        self.g = g
        self.h = underlying_directed(g)
        self.bct = block_cut_tree(self.h)
        n = g.n_vertices
        self.outdeg = [len(g.out_arcs[v]) for v in range(n)]
        self.indeg = [len(g.in_arcs[v]) for v in range(n)]
        self.extremity = [
            self.outdeg[v] == 0 or self.indeg[v] == 0 or len(self.bct.vertex_blocks[v]) >= 2 for v in range(n)
        ]


class BlockAnalysis:
    """SPQR-tree state tables for one 2-connected block."""

    def __init__(self, ctx: _Context, block_id: int):
        self.ctx = ctx
        self.block_id = block_id
        block = ctx.bct.blocks[block_id]
        t0 = time.perf_counter()
        self.sub, self.back = ctx.h.subgraph(block.edges)
        self.tree: SpqrTree = build_spqr(self.sub)
        self.build_seconds = time.perf_counter() - t0
        sub = self.sub
        nloc = sub.n
        self.out_h = [0] * nloc
        self.in_h = [0] * nloc
        for u, v in zip(sub.eu, sub.ev):
            self.out_h[u] += 1
            self.in_h[v] += 1
        total = [0] * (2 * nloc)
        for w in range(nloc):
            total[2 * w] = self.out_h[w]
            total[2 * w + 1] = self.in_h[w]
        self.counts = incidence_counts(self.tree, [(OUT, IN)] * sub.n_edges, total)
        self.ext = [ctx.extremity[v] for v in self.back]
        ns = len(self.tree.sk_u)
        self.noext: list[bool | None] = [None] * ns
        self.acyc: list[bool | None] = [None] * ns
        self.st: list[bool | None] = [None] * ns
        self._vertices = [self.tree.node_vertices(i) for i in range(self.tree.n_nodes)]

    # -- helpers -----------------------------------------------------------

    def _set(self, x: int, noext: bool, acyc: bool | None, src_has_out: bool | None):
        self.noext[x] = noext
        self.acyc[x] = acyc if noext else None
        self.st[x] = src_has_out if acyc else None

    def _arcs(self, node: int, exclude: int):
        """Arcs of the directed skeleton minus ``exclude``; virtual edges are
        included only when their state is acyclic (exactly one direction)."""
        t = self.tree
        local: dict[int, int] = {}
        tails: list[int] = []
        heads: list[int] = []
        owner: list[int] = []

        def lid(w):
            i = local.get(w)
            if i is None:
                i = local[w] = len(local)
            return i

        for w in self._vertices[node]:
            lid(w)
        for y in t.nodes[node].edges:
            if y == exclude:
                continue
            r = t.sk_real[y]
            if r >= 0:
                a, b = self.sub.eu[r], self.sub.ev[r]
            elif self.acyc[y]:
                a, b = (t.sk_u[y], t.sk_v[y]) if self.st[y] else (t.sk_v[y], t.sk_u[y])
            else:
                continue
            tails.append(lid(a))
            heads.append(lid(b))
            owner.append(y)
        return local, tails, heads, owner

    def directed_skeleton(self, node: int, exclude: int = -1) -> DirectedGraph:
        """Directed skeleton of ``node`` (vertex names are source ids).

        Virtual edges without a known orientation are left out.
        """
        local, tails, heads, _ = self._arcs(node, exclude)
        names = [None] * len(local)
        for w, i in local.items():
            names[i] = str(self.back[w])
        return DirectedGraph(names, list(zip(tails, heads)))

    def state(self, x: int) -> EdgeState:
        t = self.tree
        b = (self.back[t.sk_u[x]], self.back[t.sk_v[x]])
        acyc = self.acyc[x]
        st = self.st[x]
        return EdgeState(
            b,
            bool(self.noext[x]),
            TriState.of(acyc),
            TriState.of(st),
            TriState.of(None if st is None else not st),
        )

    def _node_rule(self, node: int, exclude: int, target: int):
        """State of ``target`` whose expansion is ``node``'s side of ``exclude``."""
        t = self.tree
        s, u = t.sk_u[exclude], t.sk_v[exclude]
        ok = all(not self.ext[w] for w in self._vertices[node] if w != s and w != u)
        virtual = [y for y in t.nodes[node].edges if y != exclude and t.sk_real[y] < 0]
        if not ok or not all(self.noext[y] for y in virtual):
            self._set(target, False, None, None)
            return
        if not all(self.acyc[y] for y in virtual):
            self._set(target, True, False, None)
            return
        local, tails, heads, _ = self._arcs(node, exclude)
        if _topo_order(len(local), tails, heads) is None:
            self._set(target, True, False, None)
            return
        src = local[t.sk_u[target]]
        self._set(target, True, True, src in tails)

    # -- phases ------------------------------------------------------------

    def phase1(self):
        """States of the edges pointing from a parent to a child."""
        t = self.tree
        for mu in reversed(t.order):
            node = t.nodes[mu]
            if node.parent < 0:
                continue
            pe = node.parent_edge
            self._node_rule(mu, pe, t.sk_twin[pe])

    def phase2(self):
        """States of the edges pointing from a child to its parent, one batch per node."""
        t = self.tree
        for nu in t.order:
            node = t.nodes[nu]
            if not node.children:
                continue
            virtual = [y for y in node.edges if t.sk_real[y] < 0]
            extremities = [w for w in self._vertices[nu] if self.ext[w]]
            bad_noext = [y for y in virtual if not self.noext[y]]
            bad_acyc = [y for y in virtual if not self.acyc[y]]
            local, tails, heads, owner = self._arcs(nu, -1)
            outdeg = [0] * len(local)
            for a in tails:
                outdeg[a] += 1
            arc_of = {y: i for i, y in enumerate(owner) if t.sk_real[y] < 0}
            k_acyclic = None
            fb = None
            if len(bad_acyc) <= 1:
                fb = _feedback_arc_ids(len(local), tails, heads)
                k_acyclic = fb is None
            for ch in node.children:
                target = t.nodes[ch].parent_edge
                x = t.sk_twin[target]
                s, u = t.sk_u[x], t.sk_v[x]
                if any(w != s and w != u for w in extremities) or any(y != x for y in bad_noext):
                    self._set(target, False, None, None)
                    continue
                if any(y != x for y in bad_acyc):
                    self._set(target, True, False, None)
                    continue
                if bad_acyc:
                    # x itself has no arc in K, so K is already K - x
                    acyc = k_acyclic
                else:
                    acyc = k_acyclic or arc_of[x] in fb
                if not acyc:
                    self._set(target, True, False, None)
                    continue
                src = local[t.sk_u[target]]
                d = outdeg[src]
                ax = arc_of.get(x)
                if ax is not None and tails[ax] == src:
                    d -= 1
                self._set(target, True, True, d > 0)

    def phase3(self) -> list[tuple[int, int]]:
        """Superbubbles with a P-node pole pair or an R-node boundary."""
        t = self.tree
        ctx = self.ctx
        g = ctx.g
        back = self.back
        found: list[tuple[int, int]] = []
        cnt = self.counts

        def confined(s, u):
            return self.out_h[s] == ctx.outdeg[back[s]] and self.in_h[u] == ctx.indeg[back[u]]

        for mu, node in enumerate(t.nodes):
            if node.kind == P_NODE:
                x0 = node.edges[0]
                a, b = t.sk_u[x0], t.sk_v[x0]
                for s, u in ((a, b), (b, a)):
                    es = [x for x in node.edges if cnt.at(t, x, s, OUT)]
                    eu = [x for x in node.edges if cnt.at(t, x, u, IN)]
                    if not es or es != eu:
                        continue
                    if not all(t.sk_real[x] >= 0 or (self.noext[x] and self.acyc[x]) for x in es):
                        continue
                    if not confined(s, u) or g.has_arc(back[u], back[s]):
                        continue
                    if len(es) == 1 and t.sk_real[es[0]] < 0 and t.nodes[t.pertaining(es[0])].kind == S_NODE:
                        continue
                    found.append((back[s], back[u]))
            elif node.kind == R_NODE:
                for y in node.edges:
                    if t.sk_real[y] >= 0 or t.nodes[t.pertaining(y)].kind == P_NODE:
                        continue
                    x = t.sk_twin[y]
                    if not (self.noext[x] and self.acyc[x]):
                        continue
                    a, b = t.sk_u[x], t.sk_v[x]
                    for s, u in ((a, b), (b, a)):
                        # s must have out-arcs at all, else the test holds vacuously
                        if (
                            ctx.outdeg[back[s]] > 0
                            and cnt.at(t, x, s, OUT) == ctx.outdeg[back[s]]
                            and cnt.at(t, x, u, IN) == ctx.indeg[back[u]]
                            and not g.has_arc(back[u], back[s])
                        ):
                            found.append((back[s], back[u]))
        return found

    def whole_block(self) -> tuple[int, int] | None:
        """The block itself as a superbubble graph, if it qualifies."""
        sources = [w for w, d in enumerate(self.in_h) if d == 0]
        sinks = [w for w, d in enumerate(self.out_h) if d == 0]
        if len(sources) != 1 or len(sinks) != 1:
            return None
        s, u = sources[0], sinks[0]
        ctx = self.ctx
        back = self.back
        if ctx.g.has_arc(back[u], back[s]):
            return None
        if any(len(ctx.bct.vertex_blocks[back[w]]) >= 2 for w in range(self.sub.n) if w != s and w != u):
            return None
        if self.out_h[s] != ctx.outdeg[back[s]] or self.in_h[u] != ctx.indeg[back[u]]:
            return None
        if _topo_order(self.sub.n, self.sub.eu, self.sub.ev) is None:
            return None
        return back[s], back[u]

    def run(self) -> list[tuple[int, int]]:
        out = []
        wb = self.whole_block()
        if wb is not None:
            out.append(wb)
        if self.tree.n_nodes >= 2:
            self.phase1()
            self.phase2()
            out.extend(self.phase3())
        return out


def analyze_block(g: DirectedGraph, edge_id: int) -> BlockAnalysis:
    """Run phases 1 and 2 on the block holding arc ``edge_id`` (self-loop free ``g``)."""
    ctx = _Context(g)
    ba = BlockAnalysis(ctx, ctx.bct.edge_block[edge_id])
    if ba.tree.n_nodes >= 2:
        ba.phase1()
        ba.phase2()
    return ba


def _trivial(ctx: _Context) -> list[tuple[int, int]]:
    g = ctx.g
    out = []
    for s, u in zip(g.tails, g.heads):
        if ctx.outdeg[s] == 1 and ctx.indeg[u] == 1 and not g.has_arc(u, s):
            out.append((s, u))
    return out


def find_all_superbubbles(g: DirectedGraph, threads: int = 1, timings: dict | None = None) -> list[Superbubble]:
    """All superbubbles of ``g`` sorted by ``(entrance, exit)`` id.

    Self-loops are dropped first.  Blocks are independent, so ``threads > 1``
    hands them to a thread pool; the result is identical for every count.
    ``timings`` receives ``"build"`` and ``"total"`` seconds as in
    :func:`bubblescope.snarl_finder.find_all_snarls`.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    start = time.perf_counter()
    g = g.without_self_loops()
    t0 = time.perf_counter()
    ctx = _Context(g)
    build = time.perf_counter() - t0
    found = set(_trivial(ctx))
    bids = [b for b, blk in enumerate(ctx.bct.blocks) if blk.kind != LOOP and not blk.is_multibridge]

    def work(b):
        ba = BlockAnalysis(ctx, b)
        return ba.run(), ba.build_seconds

    if threads > 1 and len(bids) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, bids))
    else:
        results = [work(b) for b in bids]
    for res, secs in results:
        found.update(res)
        build += secs
    out = [Superbubble(s, u) for s, u in sorted(found)]
    if timings is not None:
        timings["build"] = timings.get("build", 0.0) + build
        timings["total"] = timings.get("total", 0.0) + time.perf_counter() - start
    return out
