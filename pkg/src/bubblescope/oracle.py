"""Brute-force reference implementations and random graph generators.

Everything here follows the definitions directly and is meant for small
graphs only.  The fast modules are tested against these functions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable

from .graph_model import (
    MINUS,
    PLUS,
    BidirectedGraph,
    DirectedGraph,
    Incidence,
    Sign,
    UndirectedMultigraph,
)

DEFAULT_MAX_VERTICES = 12


class OracleSizeError(ValueError):
    """Raised when an input exceeds the brute-force size bound."""


def _check_bound(n: int, bound: int | None):
    limit = DEFAULT_MAX_VERTICES if bound is None else bound
    if n > limit:
        raise OracleSizeError(f"graph has {n} vertices; the brute-force bound is {limit}")


# ---------------------------------------------------------------------------
# snarls


class _SnarlOracle:
    """Separability of every incidence pair, computed once per graph.

    Incidence ``(v, d)`` is encoded as ``2 * v + d``.
    """

    def __init__(self, g: BidirectedGraph):
        g = g.without_self_loops()
        self.g = g
        self.n = g.n_vertices
        self.ends = [(a.vertex, a.sign, b.vertex, b.sign) for a, b in g.edges]
        self._sep: dict[tuple[int, int], int] = {}

    def component(self, c1: int, c2: int) -> int:
        """Bitmask of the snarl component for codes ``c1``, ``c2`` or 0 if not separable."""
        key = (c1, c2) if c1 < c2 else (c2, c1)
        hit = self._sep.get(key)
        if hit is not None:
            return hit
        x, dx = c1 >> 1, c1 & 1
        y, dy = c2 >> 1, c2 & 1
        n = self.n
        xp, yp = n, n + 1
        parent = list(range(n + 2))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for av, as_, bv, bs in self.ends:
            if av == x and as_ != dx:
                a = xp
            elif av == y and as_ != dy:
                a = yp
            else:
                a = av
            if bv == x and bs != dx:
                b = xp
            elif bv == y and bs != dy:
                b = yp
            else:
                b = bv
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        rx = find(x)
        mask = 0
        if rx == find(y) and rx != find(xp) and rx != find(yp):
            for v in range(n):
                if find(v) == rx:
                    mask |= 1 << v
        self._sep[key] = mask
        return mask

    def is_snarl(self, c1: int, c2: int) -> bool:
        x, y = c1 >> 1, c2 >> 1
        if x == y:
            return False
        mask = self.component(c1, c2)
        if not mask:
            return False
        mask &= ~((1 << x) | (1 << y))
        z = 0
        while mask:
            if mask & 1:
                for dz in (0, 1):
                    cz = 2 * z + dz
                    if self.component(c1, cz) and self.component(cz ^ 1, c2):
                        return False
            mask >>= 1
            z += 1
        return True


def _code(i: Incidence) -> int:
    return 2 * i.vertex + int(i.sign)


def _inc(code: int) -> Incidence:
    return Incidence(code >> 1, Sign(code & 1))


def is_separable_bruteforce(g: BidirectedGraph, inc1: Incidence, inc2: Incidence) -> bool:
    if inc1.vertex == inc2.vertex:
        return False
    return bool(_SnarlOracle(g).component(_code(inc1), _code(inc2)))


def is_snarl_bruteforce(g: BidirectedGraph, inc1: Incidence, inc2: Incidence) -> bool:
    """Check the snarl definition for one pair by performing the splits."""
    if inc1.vertex == inc2.vertex:
        return False
    return _SnarlOracle(g).is_snarl(_code(inc1), _code(inc2))


def all_snarls_bruteforce(g: BidirectedGraph, max_vertices: int | None = None) -> set[frozenset[Incidence]]:
    """Every snarl of ``g`` as an unordered pair of incidences."""
    _check_bound(g.n_vertices, max_vertices)
    o = _SnarlOracle(g)
    out = set()
    nc = 2 * g.n_vertices
    for c1 in range(nc):
        for c2 in range((c1 | 1) + 1, nc):
            if o.is_snarl(c1, c2):
                out.add(frozenset((_inc(c1), _inc(c2))))
    return out


# ---------------------------------------------------------------------------
# superbubbles


def _reach(adj: list[list[int]], start: int, stop: int) -> set[int]:
    """Vertices reachable from ``start`` without passing through ``stop``."""
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        if v == stop and v != start:
            continue
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _is_acyclic(vertices: Iterable[int], succ: list[list[int]]) -> bool:
    vs = set(vertices)
    indeg = {v: 0 for v in vs}
    for v in vs:
        for w in succ[v]:
            if w in vs:
                indeg[w] += 1
    queue = [v for v in vs if indeg[v] == 0]
    done = 0
    while queue:
        v = queue.pop()
        done += 1
        for w in succ[v]:
            if w in vs:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
    return done == len(vs)


class _BubbleOracle:
    def __init__(self, g: DirectedGraph):
        g = g.without_self_loops()
        self.g = g
        n = g.n_vertices
        self.succ = [g.successors(v) for v in range(n)]
        self.pred = [g.predecessors(v) for v in range(n)]
        self._cache: dict[tuple[int, int], frozenset[int] | None] = {}

    def bubbloid(self, s: int, t: int) -> frozenset[int] | None:
        """Vertex set of B_st when (s, t) meets reachability, matching and acyclicity."""
        key = (s, t)
        if key in self._cache:
            return self._cache[key]
        res = None
        if s != t:
            fwd = _reach(self.succ, s, t)
            if t in fwd:
                bwd = _reach(self.pred, t, s)
                if fwd == bwd and _is_acyclic(fwd, self.succ):
                    res = frozenset(fwd)
        self._cache[key] = res
        return res

    def is_superbubble(self, s: int, t: int) -> bool:
        b = self.bubbloid(s, t)
        if b is None:
            return False
        return not any(self.bubbloid(s, u) is not None for u in b if u != s and u != t)


def is_superbubbloid_bruteforce(g: DirectedGraph, s: int, t: int) -> bool:
    return _BubbleOracle(g).bubbloid(s, t) is not None


def is_superbubble_bruteforce(g: DirectedGraph, s: int, t: int) -> bool:
    """Check reachability, matching, acyclicity and minimality for ``(s, t)``."""
    if s == t:
        return False
    return _BubbleOracle(g).is_superbubble(s, t)


def all_superbubbles_bruteforce(g: DirectedGraph, max_vertices: int | None = None) -> set[tuple[int, int]]:
    _check_bound(g.n_vertices, max_vertices)
    o = _BubbleOracle(g)
    n = g.n_vertices
    return {(s, t) for s in range(n) for t in range(n) if s != t and o.is_superbubble(s, t)}


def superbubble_interior(g: DirectedGraph, s: int, t: int) -> frozenset[int] | None:
    b = _BubbleOracle(g).bubbloid(s, t)
    return None if b is None else b - {s, t}


def is_superbubbloid_by_paths(g: DirectedGraph, s: int, t: int, vertices: Iterable[int]) -> bool:
    """Path-based superbubbloid test (six conditions) for a candidate vertex set.

    This is an independent formulation used to cross-check
    :func:`is_superbubbloid_bruteforce`.
    """
    g = g.without_self_loops()
    n = g.n_vertices
    B = set(vertices)
    if s == t or s not in B or t not in B:
        return False
    succ = [g.successors(v) for v in range(n)]
    pred = [g.predecessors(v) for v in range(n)]

    def reach_avoiding(starts, adj, banned):
        seen = set(x for x in starts if x not in banned)
        stack = list(seen)
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen and w not in banned:
                    seen.add(w)
                    stack.append(w)
        return seen

    from_s = reach_avoiding([s], succ, set())
    if not B <= from_s:
        return False
    to_t = reach_avoiding([t], pred, set())
    if not B <= to_t:
        return False
    outside = [w for w in range(n) if w not in B]
    # every path from outside into B passes through s
    if reach_avoiding(outside, succ, {s}) & (B - {s}):
        return False
    # every path from B to the outside passes through t
    if reach_avoiding(B - {t}, succ, {t}) & set(outside):
        return False
    for u in B:
        for v in succ[u]:
            if v in B:
                if u in reach_avoiding([v], succ, {t}) or u in reach_avoiding([v], succ, {s}):
                    return False
    return not g.has_arc(t, s)


# ---------------------------------------------------------------------------
# connectivity


def _components_without(h: UndirectedMultigraph, removed: set[int]) -> int:
    parent = list(range(h.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in zip(h.eu, h.ev):
        if u in removed or v in removed:
            continue
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return len({find(v) for v in range(h.n) if v not in removed})


def cutvertices_bruteforce(h: UndirectedMultigraph) -> set[int]:
    base = _components_without(h, set())
    out = set()
    for v in range(h.n):
        isolated = not any(v in (a, b) and a != b for a, b in zip(h.eu, h.ev))
        if isolated:
            continue
        if _components_without(h, {v}) > base:
            out.add(v)
    return out


def blocks_bruteforce(h: UndirectedMultigraph) -> set[frozenset[int]]:
    """Edge sets of the blocks (self-loops excluded).

    Two edges share a block iff, for every vertex ``x`` (and for no vertex
    at all), their endpoints other than ``x`` stay connected in ``h - x``.
    """
    edges = [e for e in range(h.n_edges) if h.eu[e] != h.ev[e]]

    def comp_labels(removed: int) -> list[int]:
        parent = list(range(h.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in edges:
            u, v = h.eu[e], h.ev[e]
            if removed not in (u, v):
                parent[find(u)] = find(v)
        return [find(v) for v in range(h.n)]

    labels = [comp_labels(x) for x in [-1] + list(range(h.n))]
    xs = [-1] + list(range(h.n))
    parent = {e: e for e in edges}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e, f in itertools.combinations(edges, 2):
        together = True
        for x, lab in zip(xs, labels):
            le = {lab[w] for w in (h.eu[e], h.ev[e]) if w != x}
            lf = {lab[w] for w in (h.eu[f], h.ev[f]) if w != x}
            if not le & lf:
                together = False
                break
        if together:
            parent[find(e)] = find(f)
    groups: dict[int, set[int]] = {}
    for e in edges:
        groups.setdefault(find(e), set()).add(e)
    return {frozenset(s) for s in groups.values()}


def separation_pairs_bruteforce(h: UndirectedMultigraph, max_vertices: int | None = None) -> set[tuple[int, int]]:
    """Vertex pairs whose removal increases the number of connected components."""
    _check_bound(h.n, max_vertices)
    base = _components_without(h, set())
    return {
        (a, b)
        for a, b in itertools.combinations(range(h.n), 2)
        if _components_without(h, {a, b}) > base
    }


# ---------------------------------------------------------------------------
# reference SPQR tree


def _separation_classes(edges: list[tuple[int, int, int]], a: int, b: int) -> list[list[int]]:
    """Partition edge indices into separation classes with respect to {a, b}."""
    parent: dict[int, int] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, u, v in edges:
        if u not in (a, b) and v not in (a, b):
            parent[find(u)] = find(v)
    classes: dict[object, list[int]] = {}
    for i, (_, u, v) in enumerate(edges):
        if u in (a, b) and v in (a, b):
            classes[("edge", i)] = [i]
        else:
            inner = v if u in (a, b) else u
            classes.setdefault(find(inner), []).append(i)
    return list(classes.values())


def _find_split(edges: list[tuple[int, int, int]]):
    """Return ``(a, b, part)`` describing a split of a biconnected multigraph, or None."""
    verts = sorted({x for _, u, v in edges for x in (u, v)})
    if len(verts) == 2:
        return None
    # multiple edges first
    seen: dict[tuple[int, int], list[int]] = {}
    for i, (_, u, v) in enumerate(edges):
        seen.setdefault((min(u, v), max(u, v)), []).append(i)
    for (a, b), idx in seen.items():
        if len(idx) >= 2:
            return a, b, idx
    for a, b in itertools.combinations(verts, 2):
        classes = _separation_classes(edges, a, b)
        k = len(classes)
        if k < 2:
            continue
        if k == 2 and any(len(c) == 1 for c in classes):
            continue
        if k == 3 and all(len(c) == 1 for c in classes):
            continue
        total = len(edges)
        for c in classes:
            if len(c) >= 2 and total - len(c) >= 2:
                return a, b, c
    return None


def spqr_reference(h: UndirectedMultigraph, max_vertices: int | None = 10):
    """SPQR tree from repeated splitting at separation classes.

    Quadratic or worse; only for cross-checking :func:`bubblescope.spqr.build_spqr`.
    """
    from .spqr import _assemble  # merging and tree assembly are shared

    _check_bound(h.n, max_vertices)
    m = h.n_edges
    wu = list(h.eu)
    wv = list(h.ev)
    todo = [[(e, h.eu[e], h.ev[e]) for e in range(m)]]
    done: list[list[int]] = []
    while todo:
        comp = todo.pop()
        split = _find_split(comp)
        if split is None:
            done.append([e for e, _, _ in comp])
            continue
        a, b, part = split
        ve = len(wu)
        wu.append(a)
        wv.append(b)
        pset = set(part)
        left = [comp[i] for i in part] + [(ve, a, b)]
        right = [x for i, x in enumerate(comp) if i not in pset] + [(ve, a, b)]
        todo.append(left)
        todo.append(right)
    return _assemble(h, done, wu, wv)


def spqr_canonical(t) -> tuple:
    """Rooting-independent description of an SPQR tree for equality checks."""
    keys = []
    for i, node in enumerate(t.nodes):
        reals = tuple(sorted(t.sk_real[e] for e in node.edges if t.sk_real[e] >= 0))
        verts = tuple(sorted(t.node_vertices(i)))
        keys.append((node.kind, verts, reals, len(node.edges)))
    tree_edges = []
    for p, c, pe, _ in t.tree_edges():
        pair = tuple(sorted(t.endpoints(pe)))
        tree_edges.append((min(keys[p], keys[c]), max(keys[p], keys[c]), pair))
    return tuple(sorted(keys)), tuple(sorted(tree_edges))


# ---------------------------------------------------------------------------
# cycles


def simple_cycles(g: DirectedGraph) -> list[frozenset[int]]:
    """Arc-id sets of all simple cycles (exponential; tiny graphs only)."""
    n = g.n_vertices
    out = []
    for start in range(n):
        stack = [(start, iter(g.out_arcs[start]))]
        path_arcs: list[int] = []
        on_path = {start}
        while stack:
            v, it = stack[-1]
            a = next(it, None)
            if a is None:
                stack.pop()
                if path_arcs:
                    on_path.discard(v)
                    path_arcs.pop()
                continue
            w = g.heads[a]
            if w == start:
                out.append(frozenset(path_arcs + [a]))
            elif w > start and w not in on_path:
                on_path.add(w)
                path_arcs.append(a)
                stack.append((w, iter(g.out_arcs[w])))
    return out


def feedback_arcs_bruteforce(g: DirectedGraph) -> frozenset[int] | None:
    """Arcs lying on every cycle, or None when ``g`` is acyclic."""
    cycles = simple_cycles(g)
    if not cycles:
        return None
    common = set(cycles[0])
    for c in cycles[1:]:
        common &= c
    return frozenset(common)


# ---------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for a random graph.

    ``mode`` is one of ``"any"``, ``"connected"``, ``"biconnected"``,
    ``"dag"`` or ``"chain"``.  ``extra_edges`` bounds the number of edges
    added on top of the structural skeleton (spanning tree, ear
    decomposition, ...).  For ``"chain"``, ``blocks`` biconnected blocks of
    ``n_min..n_max`` vertices are glued at cutvertices.
    """

    n_min: int = 2
    n_max: int = 6
    extra_edges: int = 3
    mode: str = "connected"
    directed: bool = False
    plus_prob: float = 0.5
    blocks: int = 1
    self_loops: bool = False
    seed: int = 0


def _sign(rng: random.Random, p: float) -> Sign:
    return PLUS if rng.random() < p else MINUS


def _skeleton_pairs(rng: random.Random, spec: GeneratorSpec, n: int) -> list[tuple[int, int]]:
    """Vertex pairs for one piece on vertices 0..n-1."""
    mode = spec.mode
    verts = list(range(n))
    pairs: list[tuple[int, int]] = []
    if mode in ("biconnected", "chain"):
        if n == 2:
            pairs = [(verts[0], verts[1]), (verts[0], verts[1])]
        else:
            k = rng.randint(3, n)
            cyc = verts[:k]
            pairs = [(cyc[i], cyc[(i + 1) % k]) for i in range(k)]
            placed = k
            while placed < n:
                # ear: a path of new vertices between two distinct placed vertices
                length = rng.randint(1, n - placed)
                a, b = rng.sample(verts[:placed], 2)
                path = [a] + verts[placed : placed + length] + [b]
                pairs += list(zip(path, path[1:]))
                placed += length
        extra = rng.randint(0, spec.extra_edges)
        for _ in range(extra):
            a, b = rng.sample(verts, 2)
            pairs.append((a, b))
    elif mode == "any":
        m = rng.randint(0, n - 1 + spec.extra_edges)
        for _ in range(m):
            if spec.self_loops and rng.random() < 0.1:
                a = rng.choice(verts)
                pairs.append((a, a))
            elif n >= 2:
                pairs.append(tuple(rng.sample(verts, 2)))
    else:  # connected or dag
        for i in range(1, n):
            pairs.append((verts[rng.randrange(i)], verts[i]))
        extra = rng.randint(0, spec.extra_edges)
        for _ in range(extra):
            if spec.self_loops and rng.random() < 0.1:
                a = rng.choice(verts)
                pairs.append((a, a))
            elif n >= 2:
                pairs.append(tuple(rng.sample(verts, 2)))
    return pairs


def generate(spec: GeneratorSpec) -> BidirectedGraph | DirectedGraph:
    """Deterministic random graph for ``spec``."""
    if spec.n_min < 1 or spec.n_max < spec.n_min:
        raise ValueError("invalid vertex range")
    if spec.mode not in ("any", "connected", "biconnected", "dag", "chain"):
        raise ValueError(f"unknown mode {spec.mode!r}")
    if spec.mode == "dag" and not spec.directed:
        raise ValueError("mode 'dag' needs directed=True")
    if spec.mode in ("biconnected", "chain") and spec.n_max < 2:
        raise ValueError("biconnected pieces need at least two vertices")
    rng = random.Random(spec.seed)
    pairs: list[tuple[int, int]] = []
    if spec.mode == "chain":
        n = 0
        prev: list[int] | None = None
        for _ in range(max(1, spec.blocks)):
            size = rng.randint(max(2, spec.n_min), spec.n_max)
            if prev is None:
                verts = list(range(size))
                n = size
            else:
                verts = [rng.choice(prev)] + list(range(n, n + size - 1))
                n += size - 1
            pairs += [(verts[a], verts[c]) for a, c in _skeleton_pairs(rng, spec, size)]
            prev = verts
    else:
        lo = max(2, spec.n_min) if spec.mode == "biconnected" else spec.n_min
        n = rng.randint(lo, spec.n_max)
        pairs = _skeleton_pairs(rng, spec, n)
    names = [f"v{i}" for i in range(n)]
    if spec.directed:
        if spec.mode == "dag":
            order = list(range(n))
            rng.shuffle(order)
            rank = {v: i for i, v in enumerate(order)}
            arcs = [(a, c) if rank[a] < rank[c] else (c, a) for a, c in pairs if a != c]
        else:
            arcs = [(a, c) if rng.random() < 0.5 else (c, a) for a, c in pairs]
        return DirectedGraph(names, arcs)
    edges = [
        (Incidence(a, _sign(rng, spec.plus_prob)), Incidence(c, _sign(rng, spec.plus_prob)))
        for a, c in pairs
    ]
    return BidirectedGraph(names, edges)


def chain_of_blocks(n_blocks: int, seed: int, directed: bool = False, block_min: int = 5, block_max: int = 8):
    """Large chain of small random 2-connected blocks glued at cutvertices.

    Each block is a cycle through ``block_min..block_max`` vertices with one
    or two chords, so a block has roughly 8 to 11 edges.  In the directed
    variant most arcs point along the chain and a few point backwards.
    Built directly (not through :func:`generate`) so that it stays fast at
    a million edges.
    """
    rng = random.Random(seed)
    eu: list[int] = []
    ev: list[int] = []
    n = 1
    glue = 0
    for _ in range(n_blocks):
        k = rng.randint(block_min, block_max)
        verts = [glue] + list(range(n, n + k - 1))
        n += k - 1
        for i in range(k):
            eu.append(verts[i])
            ev.append(verts[(i + 1) % k])
        for _ in range(rng.randint(1, 3)):
            i = rng.randrange(k)
            j = rng.randrange(k)
            if abs(i - j) > 1 and {i, j} != {0, k - 1}:
                eu.append(verts[min(i, j)])
                ev.append(verts[max(i, j)])
        glue = verts[rng.randrange(1, k)]
    names = [f"v{i}" for i in range(n)]
    if directed:
        arcs = []
        for a, b in zip(eu, ev):
            arcs.append((b, a) if rng.random() < 0.08 else (a, b))
        return DirectedGraph(names, arcs)
    edges = []
    for a, b in zip(eu, ev):
        sa = MINUS if rng.random() < 0.15 else PLUS
        sb = PLUS if rng.random() < 0.15 else MINUS
        edges.append((Incidence(a, sa), Incidence(b, sb)))
    return BidirectedGraph(names, edges)
