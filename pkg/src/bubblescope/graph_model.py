"""Graph views used throughout bubblescope.

Three views share a dense integer vertex range and stable edge ids:

* :class:`BidirectedGraph` -- edges are unordered pairs of incidences.
* :class:`DirectedGraph` -- arcs are ordered vertex pairs.
* :class:`UndirectedMultigraph` -- the underlying graph of either of the
  above, with parallel edges kept and every edge remembering its source id.

Graphs are treated as immutable once constructed; the helper functions
return new graphs rather than mutating their arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, NamedTuple, Sequence


class Sign(IntEnum):
    """Sign of an incidence. ``PLUS`` sorts before ``MINUS``."""

    PLUS = 0
    MINUS = 1

    @property
    def opposite(self) -> "Sign":
        return Sign(1 - self)

    @property
    def char(self) -> str:
        return "+" if self is Sign.PLUS else "-"

    @classmethod
    def from_char(cls, c: str) -> "Sign":
        if c == "+":
            return cls.PLUS
        if c in ("-", "−"):
            return cls.MINUS
        raise ValueError(f"not a sign character: {c!r}")


PLUS = Sign.PLUS
MINUS = Sign.MINUS


class Incidence(NamedTuple):
    vertex: int
    sign: Sign

    @property
    def opposite(self) -> "Incidence":
        return Incidence(self.vertex, self.sign.opposite)


def _canon_pair(a: Incidence, b: Incidence) -> tuple[Incidence, Incidence]:
    return (a, b) if a <= b else (b, a)


def parse_incidence_token(token: str) -> tuple[str, Sign]:
    """Split ``"name+"`` into ``("name", PLUS)``."""
    if len(token) < 2:
        raise ValueError(f"malformed incidence {token!r}")
    return token[:-1], Sign.from_char(token[-1])


@dataclass(eq=False)
class UndirectedMultigraph:
    """Undirected multigraph; ``source_ids[i]`` is the id of edge ``i`` in the source view."""

    n: int
    eu: list[int] = field(default_factory=list)
    ev: list[int] = field(default_factory=list)
    source_ids: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.source_ids:
            self.source_ids = list(range(len(self.eu)))
        if not (len(self.eu) == len(self.ev) == len(self.source_ids)):
            raise ValueError("edge arrays differ in length")

    @property
    def n_vertices(self) -> int:
        return self.n

    @property
    def n_edges(self) -> int:
        return len(self.eu)

    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.eu, self.ev))

    def adjacency(self) -> list[list[int]]:
        """Per-vertex list of incident edge ids (a self-loop is listed once)."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for e, (u, v) in enumerate(zip(self.eu, self.ev)):
            adj[u].append(e)
            if v != u:
                adj[v].append(e)
        return adj

    def subgraph(self, edge_ids: Sequence[int]) -> tuple["UndirectedMultigraph", list[int]]:
        """Edge-induced subgraph with compacted vertex ids.

        Returns the subgraph and the list mapping local vertex ids back to
        ids of ``self``.  ``source_ids`` of the result refer to edge ids of
        ``self``.
        """
        local: dict[int, int] = {}
        back: list[int] = []
        eu, ev = [], []
        for e in edge_ids:
            for w, out in ((self.eu[e], eu), (self.ev[e], ev)):
                i = local.get(w)
                if i is None:
                    i = local[w] = len(back)
                    back.append(w)
                out.append(i)
        return UndirectedMultigraph(len(back), eu, ev, list(edge_ids)), back


class BidirectedGraph:
    """A bidirected graph with dense vertex ids and deduplicated edges.

    ``edges[i]`` is a canonical (sorted) pair of incidences.  Parallel edges,
    i.e. edges with the same incidence pair, are merged on construction;
    self-loops are kept.
    """

    __slots__ = ("names", "edges", "_inc", "_index")

    def __init__(self, names: Sequence[str], edges: Iterable[tuple[Incidence, Incidence]] = ()):
        self.names: list[str] = list(names)
        n = len(self.names)
        seen: set[tuple[Incidence, Incidence]] = set()
        canon: list[tuple[Incidence, Incidence]] = []
        for a, b in edges:
            a = Incidence(int(a[0]), Sign(a[1]))
            b = Incidence(int(b[0]), Sign(b[1]))
            if not (0 <= a.vertex < n and 0 <= b.vertex < n):
                raise ValueError(f"edge {a}, {b} references an unknown vertex")
            p = _canon_pair(a, b)
            if p not in seen:
                seen.add(p)
                canon.append(p)
        self.edges: list[tuple[Incidence, Incidence]] = canon
        # _inc[2*v + sign] lists edge ids; a self-loop {v+, v+} appears once.
        inc: list[list[int]] = [[] for _ in range(2 * n)]
        for i, (a, b) in enumerate(canon):
            inc[2 * a.vertex + a.sign].append(i)
            if b != a:
                inc[2 * b.vertex + b.sign].append(i)
        self._inc = inc
        self._index: dict[str, int] | None = None

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]], vertices: Iterable[str] = ()) -> "BidirectedGraph":
        """Build from tokens such as ``[("s+", "a-"), ...]``.

        Vertex ids follow the order of ``vertices`` and then first appearance.
        """
        index: dict[str, int] = {}
        names: list[str] = []

        def vid(name: str) -> int:
            if name not in index:
                index[name] = len(names)
                names.append(name)
            return index[name]

        for v in vertices:
            vid(v)
        edges = []
        for x, y in pairs:
            nx, sx = parse_incidence_token(x)
            ny, sy = parse_incidence_token(y)
            edges.append((Incidence(vid(nx), sx), Incidence(vid(ny), sy)))
        return cls(names, edges)

    @property
    def n_vertices(self) -> int:
        return len(self.names)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def vertex_id(self, name: str) -> int:
        if self._index is None:
            self._index = {nm: i for i, nm in enumerate(self.names)}
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown vertex {name!r}") from None

    def inc(self, token: str) -> Incidence:
        """Look up an incidence from a token like ``"a+"``."""
        name, sign = parse_incidence_token(token)
        return Incidence(self.vertex_id(name), sign)

    def incident_edges(self, v: int, sign: Sign) -> list[int]:
        return self._inc[2 * v + sign]

    def degree(self, v: int, sign: Sign | None = None) -> int:
        if sign is None:
            return len(self._inc[2 * v]) + len(self._inc[2 * v + 1])
        return len(self._inc[2 * v + sign])

    def render(self, i: Incidence) -> str:
        return f"{self.names[i.vertex]}{i.sign.char}"

    def without_self_loops(self) -> "BidirectedGraph":
        if all(a.vertex != b.vertex for a, b in self.edges):
            return self
        return BidirectedGraph(self.names, [(a, b) for a, b in self.edges if a.vertex != b.vertex])

    def __repr__(self) -> str:
        body = ", ".join(f"{{{self.render(a)},{self.render(b)}}}" for a, b in self.edges)
        return f"BidirectedGraph(|V|={self.n_vertices}, E=[{body}])"


class DirectedGraph:
    """A directed graph with dense vertex ids and deduplicated arcs."""

    __slots__ = ("names", "tails", "heads", "out_arcs", "in_arcs", "_index")

    def __init__(self, names: Sequence[str], arcs: Iterable[tuple[int, int]] = ()):
        self.names: list[str] = list(names)
        n = len(self.names)
        seen: set[tuple[int, int]] = set()
        tails: list[int] = []
        heads: list[int] = []
        for u, v in arcs:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc {u}->{v} references an unknown vertex")
            if (u, v) not in seen:
                seen.add((u, v))
                tails.append(u)
                heads.append(v)
        self.tails = tails
        self.heads = heads
        self.out_arcs: list[list[int]] = [[] for _ in range(n)]
        self.in_arcs: list[list[int]] = [[] for _ in range(n)]
        for a, (u, v) in enumerate(zip(tails, heads)):
            self.out_arcs[u].append(a)
            self.in_arcs[v].append(a)
        self._index: dict[str, int] | None = None

    @classmethod
    def from_arcs(cls, arcs: Iterable[tuple[str, str]], vertices: Iterable[str] = ()) -> "DirectedGraph":
        index: dict[str, int] = {}
        names: list[str] = []

        def vid(name: str) -> int:
            if name not in index:
                index[name] = len(names)
                names.append(name)
            return index[name]

        for v in vertices:
            vid(v)
        pairs = [(vid(u), vid(v)) for u, v in arcs]
        return cls(names, pairs)

    @property
    def n_vertices(self) -> int:
        return len(self.names)

    @property
    def n_arcs(self) -> int:
        return len(self.tails)

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return list(zip(self.tails, self.heads))

    def vertex_id(self, name: str) -> int:
        if self._index is None:
            self._index = {nm: i for i, nm in enumerate(self.names)}
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown vertex {name!r}") from None

    def successors(self, v: int) -> list[int]:
        return [self.heads[a] for a in self.out_arcs[v]]

    def predecessors(self, v: int) -> list[int]:
        return [self.tails[a] for a in self.in_arcs[v]]

    def has_arc(self, u: int, v: int) -> bool:
        outs, ins = self.out_arcs[u], self.in_arcs[v]
        if len(outs) <= len(ins):
            return any(self.heads[a] == v for a in outs)
        return any(self.tails[a] == u for a in ins)

    def without_self_loops(self) -> "DirectedGraph":
        if all(u != v for u, v in zip(self.tails, self.heads)):
            return self
        return DirectedGraph(self.names, [(u, v) for u, v in zip(self.tails, self.heads) if u != v])

    def __repr__(self) -> str:
        body = ", ".join(f"{self.names[u]}->{self.names[v]}" for u, v in zip(self.tails, self.heads))
        return f"DirectedGraph(|V|={self.n_vertices}, A=[{body}])"


def split(g: BidirectedGraph, inc: Incidence) -> tuple[BidirectedGraph, int]:
    """Split incidence ``x d`` of ``g``.

    ``x`` keeps every incidence of sign ``d``; a new vertex ``x'`` (the last
    id) receives every incidence of the opposite sign.  A self-loop with both
    ends at ``x`` is rewired end by end.
    """
    x, d = inc
    if not 0 <= x < g.n_vertices:
        raise ValueError(f"unknown vertex id {x}")
    new = g.n_vertices
    names = g.names + [g.names[x] + "'"]

    def move(i: Incidence) -> Incidence:
        if i.vertex == x and i.sign != d:
            return Incidence(new, i.sign)
        return i

    return BidirectedGraph(names, [(move(a), move(b)) for a, b in g.edges]), new


def underlying(g: BidirectedGraph) -> UndirectedMultigraph:
    eu = [a.vertex for a, _ in g.edges]
    ev = [b.vertex for _, b in g.edges]
    return UndirectedMultigraph(g.n_vertices, eu, ev, list(range(len(eu))))


def underlying_directed(g: DirectedGraph) -> UndirectedMultigraph:
    return UndirectedMultigraph(g.n_vertices, list(g.tails), list(g.heads), list(range(g.n_arcs)))


def tips(g: BidirectedGraph) -> set[Incidence]:
    """Incidences ``(v, d)`` of vertices whose incidences all carry sign ``d``.

    Vertices without incidences are not tips.
    """
    out: set[Incidence] = set()
    for v in range(g.n_vertices):
        p, m = g.degree(v, PLUS), g.degree(v, MINUS)
        if p and not m:
            out.add(Incidence(v, PLUS))
        elif m and not p:
            out.add(Incidence(v, MINUS))
    return out


def forward(v: int) -> int:
    """Id of ``v_fwd`` in :func:`double`."""
    return 2 * v


def reverse(v: int) -> int:
    """Id of ``v_rev`` in :func:`double`."""
    return 2 * v + 1


def _exit(w: int, d: Sign) -> int:
    return forward(w) if d is PLUS else reverse(w)


def _enter(w: int, d: Sign) -> int:
    return reverse(w) if d is PLUS else forward(w)


def double(g: BidirectedGraph) -> DirectedGraph:
    """Doubled directed graph: ``v`` becomes ``v_fwd`` (id 2v) and ``v_rev`` (id 2v+1).

    Leaving ``w`` through sign ``+`` starts at ``w_fwd``; entering ``w``
    through ``+`` lands in ``w_rev``.  Each edge yields two mirror arcs.
    """
    names = []
    for nm in g.names:
        names.extend((nm + "_fwd", nm + "_rev"))
    arcs = []
    for a, b in g.edges:
        arcs.append((_exit(a.vertex, a.sign), _enter(b.vertex, b.sign)))
        arcs.append((_exit(b.vertex, b.sign), _enter(a.vertex, a.sign)))
    return DirectedGraph(names, arcs)
