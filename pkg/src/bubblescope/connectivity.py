"""Block-cut trees, sign-consistent cutvertices and sign-cut graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .graph_model import BidirectedGraph, Incidence, Sign, UndirectedMultigraph

BICONNECTED = "biconnected"
MULTI_BRIDGE = "multi-bridge"
LOOP = "loop"


@dataclass
class Block:
    edges: list[int]
    vertices: list[int]
    kind: str

    @property
    def is_multibridge(self) -> bool:
        return self.kind == MULTI_BRIDGE


@dataclass(eq=False)
class BlockCutTree:
    """Blocks of an undirected multigraph and the cutvertices joining them.

    The tree has one node per block and one per cutvertex; block ``b`` and
    cutvertex ``c`` are adjacent iff ``c`` lies in ``b``.  Self-loops form
    blocks of kind ``"loop"`` which never make a vertex a cutvertex.
    """

    graph: UndirectedMultigraph
    blocks: list[Block]
    cutvertices: list[int]
    #: non-loop blocks containing each vertex
    vertex_blocks: list[list[int]]
    edge_block: list[int]

    def is_cutvertex(self, v: int) -> bool:
        return len(self.vertex_blocks[v]) >= 2

    def tree_edges(self) -> list[tuple[int, int]]:
        """``(block id, cutvertex)`` pairs."""
        return [(b, c) for c in self.cutvertices for b in self.vertex_blocks[c]]


def block_cut_tree(h: UndirectedMultigraph) -> BlockCutTree:
    """Blocks via the classical lowpoint DFS, iteratively and with an edge stack."""
    n = h.n
    eu, ev = h.eu, h.ev
    adj = h.adjacency()
    disc = [-1] * n
    low = [0] * n
    ptr = [0] * n
    blocks: list[Block] = []
    edge_block = [-1] * h.n_edges
    vertex_blocks: list[list[int]] = [[] for _ in range(n)]
    estack: list[int] = []
    time = 0

    def close_block(edges: list[int]):
        bid = len(blocks)
        verts: list[int] = []
        for e in edges:
            edge_block[e] = bid
            for w in (eu[e], ev[e]):
                if not vertex_blocks[w] or vertex_blocks[w][-1] != bid:
                    vertex_blocks[w].append(bid)
                    verts.append(w)
        blocks.append(Block(edges, verts, MULTI_BRIDGE if len(verts) == 2 else BICONNECTED))

    for r in range(n):
        if disc[r] >= 0 or not adj[r]:
            continue
        disc[r] = low[r] = time
        time += 1
        stack = [(r, -1)]
        while stack:
            v, pe = stack[-1]
            av = adj[v]
            if ptr[v] < len(av):
                e = av[ptr[v]]
                ptr[v] += 1
                if e == pe:
                    continue
                a, b = eu[e], ev[e]
                if a == b:
                    continue
                w = b if a == v else a
                if disc[w] < 0:
                    estack.append(e)
                    disc[w] = low[w] = time
                    time += 1
                    stack.append((w, e))
                elif disc[w] < disc[v]:
                    estack.append(e)
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if low[v] >= disc[p]:
                        edges = []
                        while True:
                            x = estack.pop()
                            edges.append(x)
                            if x == pe:
                                break
                        edges.reverse()
                        close_block(edges)
    for e in range(h.n_edges):
        if eu[e] == ev[e]:
            edge_block[e] = len(blocks)
            blocks.append(Block([e], [eu[e]], LOOP))
    cut = [v for v in range(n) if len(vertex_blocks[v]) >= 2]
    return BlockCutTree(h, blocks, cut, vertex_blocks, edge_block)


def block_sign_masks(g: BidirectedGraph, bct: BlockCutTree, vertices=None) -> dict[tuple[int, int], int]:
    """``(block, v) -> mask`` with bit 0 for ``+`` and bit 1 for ``-`` incidences of ``v`` in the block.

    Only vertices in ``vertices`` (default: the cutvertices) are recorded.
    """
    wanted = set(bct.cutvertices if vertices is None else vertices)
    out: dict[tuple[int, int], int] = {}
    for bid, blk in enumerate(bct.blocks):
        if blk.kind == LOOP:
            continue
        for e in blk.edges:
            for inc in g.edges[e]:
                if inc.vertex in wanted:
                    key = (bid, inc.vertex)
                    out[key] = out.get(key, 0) | (1 << inc.sign)
    return out


def sign_consistent_vertices(g: BidirectedGraph, bct: BlockCutTree | None = None) -> set[int]:
    """Cutvertices whose incidences are single-signed within every incident block.

    Each component of ``G - v`` meets ``v`` through exactly one block, so the
    per-block test is the component-wise test.  Self-loop blocks are ignored.
    """
    if bct is None:
        from .graph_model import underlying

        bct = block_cut_tree(underlying(g))
    masks = block_sign_masks(g, bct)
    return {v for v in bct.cutvertices if all(masks[(b, v)] != 3 for b in bct.vertex_blocks[v])}


@dataclass(eq=False)
class SignCutGraph:
    """One connected component after splitting every sign-consistent vertex.

    Vertices keep their source ids.  ``split`` maps each sign-consistent
    vertex present here to the sign it carries in this component.
    """

    source: BidirectedGraph
    blocks: list[int]
    vertices: list[int]
    edges: list[int]
    split: dict[int, Sign] = field(default_factory=dict)
    isolated: bool = False

    @cached_property
    def vertex_map(self) -> list[int]:
        """Local vertex id -> source vertex id."""
        return list(self.vertices)

    @cached_property
    def graph(self) -> BidirectedGraph:
        local = {v: i for i, v in enumerate(self.vertices)}
        names = [self.source.names[v] for v in self.vertices]
        edges = []
        for e in self.edges:
            a, b = self.source.edges[e]
            edges.append((Incidence(local[a.vertex], a.sign), Incidence(local[b.vertex], b.sign)))
        return BidirectedGraph(names, edges)

    def tips(self) -> list[Incidence]:
        """Tips of this component, in source ids, sorted."""
        out = []
        if self.isolated:
            return out
        for v in self.vertices:
            s = self.split.get(v)
            if s is not None:
                out.append(Incidence(v, s))
                continue
            p = any(e in self._edge_set for e in self.source.incident_edges(v, Sign.PLUS))
            m = any(e in self._edge_set for e in self.source.incident_edges(v, Sign.MINUS))
            if p != m:
                out.append(Incidence(v, Sign.PLUS if p else Sign.MINUS))
        out.sort()
        return out

    @cached_property
    def _edge_set(self) -> frozenset[int]:
        return frozenset(self.edges)


def sign_cut_partition(g: BidirectedGraph, bct: BlockCutTree):
    """Group blocks into sign-cut graphs.

    Returns ``(groups, split_signs, consistent)`` where ``groups`` is a list of
    block-id lists (sorted by smallest block id), ``split_signs[b]`` maps a
    sign-consistent vertex of block ``b`` to its sign there, and
    ``consistent`` is the set of sign-consistent vertices.
    """
    nb = len(bct.blocks)
    parent = list(range(nb))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    masks = block_sign_masks(g, bct)
    consistent: set[int] = set()
    for v in bct.cutvertices:
        bl = bct.vertex_blocks[v]
        if all(masks[(b, v)] != 3 for b in bl):
            consistent.add(v)
            first = [-1, -1]
            for b in bl:
                s = masks[(b, v)] - 1  # 1 -> plus (0), 2 -> minus (1)
                if first[s] < 0:
                    first[s] = b
                else:
                    ra, rb = find(b), find(first[s])
                    if ra != rb:
                        parent[ra] = rb
        else:
            r0 = find(bl[0])
            for b in bl[1:]:
                rb = find(b)
                if rb != r0:
                    parent[rb] = r0
    groups: dict[int, list[int]] = {}
    for b in range(nb):
        if bct.blocks[b].kind == LOOP:
            continue
        groups.setdefault(find(b), []).append(b)
    return list(groups.values()), masks, consistent


def sign_cut_graphs(g: BidirectedGraph, bct: BlockCutTree | None = None) -> list[SignCutGraph]:
    """Sign-cut graphs of ``g``; isolated vertices and isolated split copies are flagged.

    Self-loops are ignored (they play no role in snarl detection).
    """
    from .graph_model import underlying

    g = g.without_self_loops()
    if bct is None:
        bct = block_cut_tree(underlying(g))
    groups, masks, consistent = sign_cut_partition(g, bct)
    out: list[SignCutGraph] = []
    sides_seen: dict[int, set[int]] = {v: set() for v in consistent}
    for blocks in groups:
        verts: list[int] = []
        seen: set[int] = set()
        edges: list[int] = []
        split: dict[int, Sign] = {}
        for b in blocks:
            blk = bct.blocks[b]
            edges.extend(blk.edges)
            for v in blk.vertices:
                if v not in seen:
                    seen.add(v)
                    verts.append(v)
                if v in consistent:
                    s = Sign(masks[(b, v)] - 1)
                    split[v] = s
                    sides_seen[v].add(s)
        verts.sort()
        edges.sort()
        out.append(SignCutGraph(g, blocks, verts, edges, split))
    for v in sorted(consistent):
        for s in (Sign.PLUS, Sign.MINUS):
            if s not in sides_seen[v]:
                out.append(SignCutGraph(g, [], [v], [], {v: s.opposite}, isolated=True))
    for v in range(g.n_vertices):
        if not bct.vertex_blocks[v]:
            out.append(SignCutGraph(g, [], [v], [], {}, isolated=True))
    return out
