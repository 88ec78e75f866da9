"""SPQR trees of 2-connected undirected multigraphs.

Construction follows the classical triconnected-components approach: split
off parallel edges into bonds, run the palm-tree path search that peels off
split components at type-1 and type-2 separation pairs, then merge bonds
with bonds and polygons with polygons that share a virtual edge.  The
resulting components are the skeletons of the tree.

Skeleton edges get their own ids.  A skeleton edge is *real* when it
carries an edge of the input graph, otherwise it is virtual and has a
``twin`` in the neighbouring skeleton.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

from .graph_model import UndirectedMultigraph

S_NODE = "S"
P_NODE = "P"
R_NODE = "R"


class NotBiconnectedError(ValueError):
    """Raised when :func:`build_spqr` receives a graph that is not 2-connected."""


@dataclass
class SpqrNode:
    kind: str
    edges: list[int]
    parent: int = -1
    #: skeleton edge of this node whose twin lives in the parent
    parent_edge: int = -1
    children: list[int] = field(default_factory=list)
    #: S-nodes only: vertices in cyclic order; ``edges[i]`` joins
    #: ``cycle[i]`` and ``cycle[(i + 1) % k]``
    cycle: list[int] | None = None

    @property
    def vertices(self) -> list[int]:
        return self.cycle if self.cycle is not None else []


@dataclass(eq=False)
class SpqrTree:
    graph: UndirectedMultigraph
    nodes: list[SpqrNode]
    sk_u: list[int]
    sk_v: list[int]
    #: input edge id for real skeleton edges, -1 for virtual ones
    sk_real: list[int]
    sk_twin: list[int]
    sk_node: list[int]
    root: int
    #: nodes in DFS preorder from the root
    order: list[int]

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def is_virtual(self, e: int) -> bool:
        return self.sk_real[e] < 0

    def pertaining(self, e: int) -> int:
        """Node on the other side of virtual skeleton edge ``e``."""
        return self.sk_node[self.sk_twin[e]]

    def endpoints(self, e: int) -> tuple[int, int]:
        return self.sk_u[e], self.sk_v[e]

    def node_vertices(self, i: int) -> list[int]:
        node = self.nodes[i]
        if node.cycle is not None:
            return list(node.cycle)
        seen: dict[int, None] = {}
        for e in node.edges:
            seen.setdefault(self.sk_u[e])
            seen.setdefault(self.sk_v[e])
        return list(seen)

    def real_edge_location(self) -> dict[int, int]:
        """Map input edge id -> skeleton edge id."""
        return {r: e for e, r in enumerate(self.sk_real) if r >= 0}

    def tree_edges(self) -> Iterator[tuple[int, int, int, int]]:
        """Yield ``(parent, child, parent_side_edge, child_side_edge)``."""
        for c in self.order:
            node = self.nodes[c]
            if node.parent >= 0:
                ce = node.parent_edge
                yield node.parent, c, self.sk_twin[ce], ce

    def to_text(self) -> str:
        """Line-oriented debug dump: one ``N`` line per node, one ``T`` line per tree edge."""
        lines = []
        names = [str(i) for i in range(self.graph.n)]
        for i, node in enumerate(self.nodes):
            parts = []
            for e in node.edges:
                tag = f"r{self.sk_real[e]}" if self.sk_real[e] >= 0 else f"v{min(e, self.sk_twin[e])}"
                parts.append(f"{names[self.sk_u[e]]}-{names[self.sk_v[e]]}:{tag}")
            lines.append(f"N {i} {node.kind} " + " ".join(parts))
        for p, c, pe, ce in self.tree_edges():
            lines.append(f"T {p} {c} {self.sk_u[pe]}-{self.sk_v[pe]}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Expansion:
    """Subgraph of the input represented by one skeleton edge.

    For a real edge this is the edge itself; for a virtual edge it is the
    union of the real edges in the subtree hanging off its twin.  Edge ids
    are materialized on first access only.
    """

    tree: SpqrTree
    edge: int

    @property
    def boundary(self) -> tuple[int, int]:
        return self.tree.endpoints(self.edge)

    @cached_property
    def edge_ids(self) -> frozenset[int]:
        t = self.tree
        if not t.is_virtual(self.edge):
            return frozenset((t.sk_real[self.edge],))
        out = []
        blocked = t.sk_twin[self.edge]
        stack = [(t.pertaining(self.edge), blocked)]
        while stack:
            node, via = stack.pop()
            for e in t.nodes[node].edges:
                if e == via:
                    continue
                if t.sk_real[e] >= 0:
                    out.append(t.sk_real[e])
                else:
                    stack.append((t.pertaining(e), t.sk_twin[e]))
        return frozenset(out)

    @cached_property
    def vertices(self) -> frozenset[int]:
        g = self.tree.graph
        vs = set()
        for e in self.edge_ids:
            vs.add(g.eu[e])
            vs.add(g.ev[e])
        return frozenset(vs)


def expansion(t: SpqrTree, edge: int) -> Expansion:
    if not 0 <= edge < len(t.sk_real):
        raise KeyError(f"unknown skeleton edge {edge}")
    return Expansion(t, edge)


def separation_pairs(t: SpqrTree) -> Iterator[tuple[int, int]]:
    """Endpoints of virtual edges and non-adjacent pairs of S skeletons, deduplicated."""
    seen: set[tuple[int, int]] = set()

    def emit(a, b):
        p = (a, b) if a < b else (b, a)
        if p not in seen:
            seen.add(p)
            return p
        return None

    for e, r in enumerate(t.sk_real):
        if r < 0:
            p = emit(t.sk_u[e], t.sk_v[e])
            if p:
                yield p
    for node in t.nodes:
        if node.kind != S_NODE:
            continue
        cyc = node.cycle
        k = len(cyc)
        for i in range(k):
            for j in range(i + 2, k):
                if i == 0 and j == k - 1:
                    continue
                p = emit(cyc[i], cyc[j])
                if p:
                    yield p


# ---------------------------------------------------------------------------
# construction


def build_spqr(h: UndirectedMultigraph) -> SpqrTree:
    """Build the SPQR tree of a 2-connected multigraph with at least two edges.

    The tree is rooted at the node holding input edge 0.
    """
    if h.n_edges < 2:
        raise NotBiconnectedError("an SPQR tree needs at least two edges")
    for u, v in zip(h.eu, h.ev):
        if u == v:
            raise NotBiconnectedError("self-loops are not allowed")
    comps, wu, wv = _split_components(h.n, h.eu, h.ev)
    return _assemble(h, comps, wu, wv)


def _split_components(n: int, eu: list[int], ev: list[int]):
    """Return ``(components, wu, wv)``.

    ``components`` is a list of edge-id lists over a working edge set whose
    first ``len(eu)`` ids are the input edges and whose remaining ids are
    virtual edges with endpoints ``wu``/``wv``.
    """
    m = len(eu)
    wu = list(eu)
    wv = list(ev)
    comps: list[list[int]] = []

    groups: dict[tuple[int, int], list[int]] = {}
    for e in range(m):
        a, b = eu[e], ev[e]
        key = (a, b) if a < b else (b, a)
        groups.setdefault(key, []).append(e)
    if n == 2:
        if len(groups) != 1:
            raise NotBiconnectedError("graph is not connected")
        return [list(range(m))], wu, wv

    alive: list[int] = []
    for (a, b), es in groups.items():
        if len(es) == 1:
            alive.append(es[0])
        else:
            ve = len(wu)
            wu.append(a)
            wv.append(b)
            comps.append(es + [ve])
            alive.append(ve)

    search = _PathSearch(n, wu, wv, alive)
    search.run()
    comps.extend(search.components)
    return comps, search.wu, search.wv


class _PathSearch:
    """Palm-tree DFS and path search producing split components."""

    def __init__(self, n: int, wu: list[int], wv: list[int], alive: list[int]):
        self.n = n
        self.wu = wu
        self.wv = wv
        self.alive = alive
        self.components: list[list[int]] = []

    # -- first DFS: numbering, lowpoints, orientation -----------------------
    def _dfs1(self):
        n, wu, wv = self.n, self.wu, self.wv
        ne = len(wu)
        adj: list[list[int]] = [[] for _ in range(n)]
        for e in self.alive:
            adj[wu[e]].append(e)
            adj[wv[e]].append(e)
        num = [0] * n
        father = [-1] * n
        low1 = [0] * n
        low2 = [0] * n
        nd = [1] * n
        etype = [0] * ne  # 1 tree arc, 2 frond
        src = [0] * ne
        tgt = [0] * ne
        ptr = [0] * n
        num[0] = low1[0] = low2[0] = 1
        cnt = 1
        stack = [0]
        while stack:
            v = stack[-1]
            av = adj[v]
            if ptr[v] < len(av):
                e = av[ptr[v]]
                ptr[v] += 1
                if etype[e]:
                    continue
                w = wu[e] if wv[e] == v else wv[e]
                src[e] = v
                tgt[e] = w
                if num[w] == 0:
                    etype[e] = 1
                    father[w] = v
                    cnt += 1
                    num[w] = low1[w] = low2[w] = cnt
                    stack.append(w)
                else:
                    etype[e] = 2
                    nw = num[w]
                    if nw < low1[v]:
                        low2[v] = low1[v]
                        low1[v] = nw
                    elif nw > low1[v] and nw < low2[v]:
                        low2[v] = nw
            else:
                stack.pop()
                if stack:
                    p = stack[-1]
                    nd[p] += nd[v]
                    l1, l2 = low1[v], low2[v]
                    if l1 < low1[p]:
                        low2[p] = min(low1[p], l2)
                        low1[p] = l1
                    elif l1 == low1[p]:
                        if l2 < low2[p]:
                            low2[p] = l2
                    elif l1 < low2[p]:
                        low2[p] = l1
        if cnt != n:
            raise NotBiconnectedError("graph is not connected")
        root_children = 0
        for w in range(1, n):
            p = father[w]
            if p == 0:
                root_children += 1
            elif low1[w] >= num[p]:
                raise NotBiconnectedError("graph has a cutvertex")
        if root_children > 1:
            raise NotBiconnectedError("graph has a cutvertex")
        return num, father, low1, low2, nd, etype, src, tgt

    def run(self):
        n = self.n
        num, father, low1, low2, nd, etype, src, tgt = self._dfs1()

        # Order out-arcs by phi (bucket sort).
        buckets: list[list[int]] = [[] for _ in range(3 * n + 3)]
        for e in self.alive:
            v, w = src[e], tgt[e]
            if etype[e] == 1:
                phi = 3 * low1[w] if low2[w] < num[v] else 3 * low1[w] + 2
            else:
                phi = 3 * num[w] + 1
            buckets[phi].append(e)
        ordered: list[list[int]] = [[] for _ in range(n)]
        for b in buckets:
            for e in b:
                ordered[src[e]].append(e)

        # Path finder: new numbering, path starts, highpoint lists.
        ne = len(self.wu)
        starts = [False] * ne
        newnum = [0] * n
        frond_order: list[int] = []  # fronds in visiting order
        counter = n
        new_path = True
        ptr = [0] * n
        stack = [0]
        newnum[0] = counter - nd[0] + 1
        while stack:
            v = stack[-1]
            ov = ordered[v]
            if ptr[v] < len(ov):
                e = ov[ptr[v]]
                ptr[v] += 1
                if new_path:
                    new_path = False
                    starts[e] = True
                if etype[e] == 1:
                    w = tgt[e]
                    newnum[w] = counter - nd[w] + 1
                    stack.append(w)
                else:
                    frond_order.append(e)
                    new_path = True
            else:
                counter -= 1
                stack.pop()

        # Relabel everything to the new numbering (vertices 1..n).
        node_at = [0] * (n + 1)
        for v in range(n):
            node_at[newnum[v]] = v
        old_to_new = [0] * (n + 1)
        for v in range(n):
            old_to_new[num[v]] = newnum[v]
        N = n + 1
        self.node_at = node_at
        self.L1 = L1 = [0] * N
        self.L2 = L2 = [0] * N
        self.ND = ND = [0] * N
        self.par = par = [0] * N
        for v in range(n):
            x = newnum[v]
            L1[x] = old_to_new[low1[v]]
            L2[x] = old_to_new[low2[v]]
            ND[x] = nd[v]
            par[x] = newnum[father[v]] if father[v] >= 0 else 0
        self.src = S = [0] * ne
        self.tgt = T = [0] * ne
        self.etype = etype
        for e in self.alive:
            S[e] = newnum[src[e]]
            T[e] = newnum[tgt[e]]
        self.starts = starts
        self.tree_arc = tree_arc = [-1] * N
        deg = [0] * N
        for e in self.alive:
            deg[S[e]] += 1
            deg[T[e]] += 1
            if etype[e] == 1:
                tree_arc[T[e]] = e
        self.deg = deg

        # Adjacency as doubly linked lists of slots; one slot per alive edge.
        self.slot_edge = slot_edge = []
        self.snext = snext = []
        self.sprev = sprev = []
        self.ahead = ahead = [-1] * N
        atail = [-1] * N
        self.alen = alen = [0] * N
        self.in_adj = in_adj = [-1] * ne
        for v in range(n):
            x = newnum[v]
            for e in ordered[v]:
                s = len(slot_edge)
                slot_edge.append(e)
                snext.append(-1)
                sprev.append(atail[x])
                if atail[x] >= 0:
                    snext[atail[x]] = s
                else:
                    ahead[x] = s
                atail[x] = s
                alen[x] += 1
                in_adj[e] = s

        # Highpoint lists, also doubly linked.
        self.hval = []
        self.hnext = []
        self.hprev = []
        self.hhead = [-1] * N
        self.htail = [-1] * N
        self.in_high = [-1] * ne
        for e in frond_order:
            self.in_high[e] = self._high_append(T[e], S[e])

        self._search()

    # -- linked-list helpers -------------------------------------------------
    def _adj_remove(self, v: int, s: int):
        p, q = self.sprev[s], self.snext[s]
        if p >= 0:
            self.snext[p] = q
        else:
            self.ahead[v] = q
        if q >= 0:
            self.sprev[q] = p
        self.alen[v] -= 1
        # the slot keeps its own next pointer so an iterator sitting on it
        # can still advance

    def _high_new(self, val: int) -> int:
        self.hval.append(val)
        self.hnext.append(-1)
        self.hprev.append(-1)
        return len(self.hval) - 1

    def _high_append(self, w: int, val: int) -> int:
        s = self._high_new(val)
        t = self.htail[w]
        self.hprev[s] = t
        if t >= 0:
            self.hnext[t] = s
        else:
            self.hhead[w] = s
        self.htail[w] = s
        return s

    def _high_push_front(self, w: int, val: int) -> int:
        s = self._high_new(val)
        h = self.hhead[w]
        self.hnext[s] = h
        if h >= 0:
            self.hprev[h] = s
        else:
            self.htail[w] = s
        self.hhead[w] = s
        return s

    def _high(self, w: int) -> int:
        h = self.hhead[w]
        return self.hval[h] if h >= 0 else 0

    def _del_high(self, e: int):
        s = self.in_high[e]
        if s < 0:
            return
        self.in_high[e] = -1
        w = self.tgt[e]
        p, q = self.hprev[s], self.hnext[s]
        if p >= 0:
            self.hnext[p] = q
        else:
            self.hhead[w] = q
        if q >= 0:
            self.hprev[q] = p
        else:
            self.htail[w] = p

    def _new_virtual(self, a: int, b: int) -> int:
        """Virtual edge from new-numbered ``a`` to ``b``."""
        e = len(self.wu)
        self.wu.append(self.node_at[a])
        self.wv.append(self.node_at[b])
        self.src.append(a)
        self.tgt.append(b)
        self.etype.append(0)
        self.starts.append(False)
        self.in_adj.append(-1)
        self.in_high.append(-1)
        return e

    def _first_target(self, w: int) -> int:
        s = self.ahead[w]
        return self.tgt[self.slot_edge[s]] if s >= 0 else 0

    # -- path search ---------------------------------------------------------
    def _search(self):
        src, tgt, etype, starts = self.src, self.tgt, self.etype, self.starts
        L1, L2, ND, par = self.L1, self.L2, self.ND, self.par
        deg, tree_arc, in_adj = self.deg, self.tree_arc, self.in_adj
        slot_edge, snext = self.slot_edge, self.snext
        comps = self.components
        estack: list[int] = []
        # TSTACK as three parallel lists; EOS is a = -1
        th: list[int] = [-1]
        ta: list[int] = [-1]
        tb: list[int] = [-1]

        cur = [-1] * (self.n + 1)  # current slot per vertex
        outv = [0] * (self.n + 1)
        yv = [0] * (self.n + 1)
        cur[1] = self.ahead[1]
        outv[1] = self.alen[1]
        vstack = [1]
        returning = False
        while vstack:
            v = vstack[-1]
            it = cur[v]
            if not returning:
                if it < 0:
                    vstack.pop()
                    returning = True
                    continue
                e = slot_edge[it]
                w = tgt[e]
                y = yv[v]
                if etype[e] == 1:
                    if starts[e]:
                        lw = L1[w]
                        if ta[-1] > lw:
                            b = 0
                            while ta[-1] > lw:
                                if th[-1] > y:
                                    y = th[-1]
                                b = tb[-1]
                                th.pop()
                                ta.pop()
                                tb.pop()
                            th.append(y)
                            ta.append(lw)
                            tb.append(b)
                        else:
                            th.append(w + ND[w] - 1)
                            ta.append(lw)
                            tb.append(v)
                        th.append(-1)
                        ta.append(-1)
                        tb.append(-1)
                    yv[v] = y
                    yv[w] = 0
                    cur[w] = self.ahead[w]
                    outv[w] = self.alen[w]
                    vstack.append(w)
                    continue
                # frond
                if starts[e]:
                    if ta[-1] > w:
                        b = 0
                        while ta[-1] > w:
                            if th[-1] > y:
                                y = th[-1]
                            b = tb[-1]
                            th.pop()
                            ta.pop()
                            tb.pop()
                        th.append(y)
                        ta.append(w)
                        tb.append(b)
                    else:
                        th.append(v)
                        ta.append(w)
                        tb.append(v)
                yv[v] = y
                estack.append(e)
                cur[v] = snext[it]
                continue

            # returning from the child reached through slot `it`
            returning = False
            e = slot_edge[it]
            w = tgt[e]
            estack.append(tree_arc[w])

            # type-2 separation pairs
            while v != 1 and (ta[-1] == v or (deg[w] == 2 and self._first_target(w) > w)):
                a, b = ta[-1], tb[-1]
                if a == v and par[b] == a:
                    th.pop()
                    ta.pop()
                    tb.pop()
                    continue
                e_ab = -1
                if deg[w] == 2 and self._first_target(w) > w:
                    e1 = estack.pop()
                    e2 = estack.pop()
                    self._adj_remove(w, in_adj[e2])
                    x = tgt[e2]
                    e_virt = self._new_virtual(v, x)
                    deg[v] -= 1
                    deg[x] -= 1
                    comps.append([e1, e2, e_virt])
                    if estack:
                        top = estack[-1]
                        if src[top] == x and tgt[top] == v:
                            e_ab = estack.pop()
                            self._adj_remove(x, in_adj[e_ab])
                            self._del_high(e_ab)
                else:
                    h = th[-1]
                    th.pop()
                    ta.pop()
                    tb.pop()
                    comp = []
                    while estack:
                        xy = estack[-1]
                        x, yy = src[xy], tgt[xy]
                        if not (a <= x <= h and a <= yy <= h):
                            break
                        if (x == a and yy == b) or (yy == a and x == b):
                            e_ab = estack.pop()
                            self._adj_remove(src[e_ab], in_adj[e_ab])
                            self._del_high(e_ab)
                        else:
                            eh = estack.pop()
                            if in_adj[eh] != it:
                                self._adj_remove(src[eh], in_adj[eh])
                                self._del_high(eh)
                            comp.append(eh)
                            deg[x] -= 1
                            deg[yy] -= 1
                    e_virt = self._new_virtual(a, b)
                    comp.append(e_virt)
                    comps.append(comp)
                    x = b
                if e_ab >= 0:
                    e2v = self._new_virtual(v, x)
                    comps.append([e_ab, e_virt, e2v])
                    deg[x] -= 1
                    deg[v] -= 1
                    e_virt = e2v
                estack.append(e_virt)
                slot_edge[it] = e_virt
                in_adj[e_virt] = it
                starts[e_virt] = starts[e]
                deg[x] += 1
                deg[v] += 1
                par[x] = v
                tree_arc[x] = e_virt
                etype[e_virt] = 1
                w = x

            # type-1 separation pair
            lw = L1[w]
            if L2[w] >= v and lw < v and (par[v] != 1 or outv[v] >= 2):
                comp = []
                hi = w + ND[w]
                while estack:
                    xy = estack[-1]
                    x, yy = src[xy], tgt[xy]
                    if not (w <= x < hi or w <= yy < hi):
                        break
                    estack.pop()
                    comp.append(xy)
                    self._del_high(xy)
                    deg[x] -= 1
                    deg[yy] -= 1
                e_virt = self._new_virtual(v, lw)
                comp.append(e_virt)
                comps.append(comp)
                if estack:
                    top = estack[-1]
                    if (src[top] == v and tgt[top] == lw) or (src[top] == lw and tgt[top] == v):
                        eh = estack.pop()
                        if in_adj[eh] != it:
                            self._adj_remove(src[eh], in_adj[eh])
                        e2v = self._new_virtual(v, lw)
                        comps.append([eh, e_virt, e2v])
                        if self.in_high[eh] >= 0:
                            self.in_high[e2v] = self.in_high[eh]
                            self.in_high[eh] = -1
                        deg[v] -= 1
                        deg[lw] -= 1
                        e_virt = e2v
                if lw != par[v]:
                    estack.append(e_virt)
                    slot_edge[it] = e_virt
                    in_adj[e_virt] = it
                    etype[e_virt] = 2
                    if self.in_high[e_virt] < 0 and self._high(lw) < v:
                        self.in_high[e_virt] = self._high_push_front(lw, v)
                    deg[v] += 1
                    deg[lw] += 1
                else:
                    self._adj_remove(v, it)
                    e2v = self._new_virtual(lw, v)
                    old = tree_arc[v]
                    comps.append([e_virt, e2v, old])
                    tree_arc[v] = e2v
                    etype[e2v] = 1
                    ps = in_adj[old]
                    if ps >= 0:
                        slot_edge[ps] = e2v
                        in_adj[e2v] = ps
                        starts[e2v] = starts[old]

            if starts[e]:
                while ta[-1] != -1:
                    th.pop()
                    ta.pop()
                    tb.pop()
                th.pop()
                ta.pop()
                tb.pop()
            hv = self._high(v)
            while ta[-1] != -1 and tb[-1] != v and hv > th[-1]:
                th.pop()
                ta.pop()
                tb.pop()
            outv[v] -= 1
            cur[v] = snext[it]

        if estack:
            comps.append(estack)


def _classify(edges: list[int], wu: list[int], wv: list[int]) -> str:
    verts: dict[int, int] = {}
    for e in edges:
        verts[wu[e]] = verts.get(wu[e], 0) + 1
        verts[wv[e]] = verts.get(wv[e], 0) + 1
    if len(verts) == 2:
        return P_NODE
    if len(edges) == len(verts) and all(d == 2 for d in verts.values()):
        return S_NODE
    return R_NODE


def _assemble(h: UndirectedMultigraph, comps: list[list[int]], wu: list[int], wv: list[int]) -> SpqrTree:
    m = h.n_edges
    kinds = [_classify(c, wu, wv) for c in comps]

    # where each virtual working edge occurs
    occ: dict[int, list[int]] = {}
    for ci, c in enumerate(comps):
        for e in c:
            if e >= m:
                occ.setdefault(e, []).append(ci)

    # union components of equal kind S/S or P/P sharing a virtual edge
    parent = list(range(len(comps)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merged_away: set[int] = set()
    for e, cs in occ.items():
        if len(cs) != 2:
            raise AssertionError(f"virtual edge {e} occurs {len(cs)} times")
        a, b = cs
        if kinds[a] == kinds[b] and kinds[a] != R_NODE:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
            merged_away.add(e)

    groups: dict[int, list[int]] = {}
    for ci in range(len(comps)):
        groups.setdefault(find(ci), []).append(ci)

    sk_u: list[int] = []
    sk_v: list[int] = []
    sk_real: list[int] = []
    sk_node: list[int] = []
    nodes: list[SpqrNode] = []
    vocc: dict[int, list[int]] = {}
    real_home = -1
    for root_ci, members in groups.items():
        ni = len(nodes)
        edges = []
        for ci in members:
            for e in comps[ci]:
                if e in merged_away:
                    continue
                s = len(sk_u)
                sk_u.append(wu[e])
                sk_v.append(wv[e])
                sk_node.append(ni)
                if e < m:
                    sk_real.append(e)
                    if e == 0:
                        real_home = ni
                else:
                    sk_real.append(-1)
                    vocc.setdefault(e, []).append(s)
                edges.append(s)
        nodes.append(SpqrNode(kinds[root_ci], edges))

    sk_twin = [-1] * len(sk_u)
    for e, ss in vocc.items():
        a, b = ss
        sk_twin[a] = b
        sk_twin[b] = a

    # root and orient
    order = []
    nodes[real_home].parent = -1
    stack = [real_home]
    seen = [False] * len(nodes)
    seen[real_home] = True
    while stack:
        x = stack.pop()
        order.append(x)
        nd = nodes[x]
        for e in nd.edges:
            t = sk_twin[e]
            if t < 0:
                continue
            y = sk_node[t]
            if seen[y]:
                continue
            seen[y] = True
            nodes[y].parent = x
            nodes[y].parent_edge = t
            nd.children.append(y)
            stack.append(y)

    tree = SpqrTree(h, nodes, sk_u, sk_v, sk_real, sk_twin, sk_node, real_home, order)
    for nd in nodes:
        if nd.kind == S_NODE:
            _order_cycle(tree, nd)
    return tree


def _order_cycle(t: SpqrTree, node: SpqrNode):
    inc: dict[int, list[int]] = {}
    for e in node.edges:
        inc.setdefault(t.sk_u[e], []).append(e)
        inc.setdefault(t.sk_v[e], []).append(e)
    first = node.edges[0]
    start = t.sk_u[first]
    cycle = [start]
    edges = [first]
    prev = first
    cur = t.sk_v[first]
    while cur != start:
        cycle.append(cur)
        a, b = inc[cur]
        nxt = b if a == prev else a
        edges.append(nxt)
        prev = nxt
        cur = t.sk_u[nxt] if t.sk_v[nxt] == cur else t.sk_v[nxt]
    node.cycle = cycle
    node.edges = edges
