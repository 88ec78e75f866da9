"""Shared structural checks used by several test modules."""

import networkx as nx

from bubblescope.graph_model import UndirectedMultigraph
from bubblescope.spqr import P_NODE, R_NODE, S_NODE


def simple_biconnected(g):
    """Underlying simple graph of ``g`` as an UndirectedMultigraph, or None if it is not 2-connected."""
    pairs = sorted({(min(u, v), max(u, v)) for u, v in _pairs(g) if u != v})
    G = nx.Graph(pairs)
    if G.number_of_nodes() < 3 or not nx.is_biconnected(G):
        return None
    nodes = sorted(G.nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    eu = [idx[u] for u, _ in pairs]
    ev = [idx[v] for _, v in pairs]
    return UndirectedMultigraph(len(nodes), eu, ev, list(range(len(pairs))))


def _pairs(g):
    if hasattr(g, "tails"):
        return zip(g.tails, g.heads)
    return ((a.vertex, b.vertex) for a, b in g.edges)


def spqr_violations(t) -> list[str]:
    """Structural problems of an SPQR tree; empty when all invariants hold."""
    bad = []
    real_seen = {}
    for e, r in enumerate(t.sk_real):
        if r >= 0:
            real_seen[r] = real_seen.get(r, 0) + 1
        else:
            tw = t.sk_twin[e]
            if tw < 0 or t.sk_twin[tw] != e or t.sk_node[tw] == t.sk_node[e]:
                bad.append(f"virtual edge {e} has a broken twin")
            elif {t.sk_u[e], t.sk_v[e]} != {t.sk_u[tw], t.sk_v[tw]}:
                bad.append(f"twins {e},{tw} disagree on endpoints")
    if sorted(real_seen) != list(range(t.graph.n_edges)) or any(c != 1 for c in real_seen.values()):
        bad.append("real edges not covered exactly once")
    for i, node in enumerate(t.nodes):
        verts = set(t.node_vertices(i))
        ends = [(t.sk_u[e], t.sk_v[e]) for e in node.edges]
        if node.kind == S_NODE:
            G = nx.MultiGraph(ends)
            if len(verts) < 3 or len(ends) != len(verts) or any(d != 2 for _, d in G.degree()) or not nx.is_connected(G):
                bad.append(f"S-node {i} is not a cycle")
        elif node.kind == P_NODE:
            if len(verts) != 2 or len(ends) < 3:
                bad.append(f"P-node {i} is not a bond with three or more edges")
        elif node.kind == R_NODE:
            G = nx.Graph(ends)
            if len(set(map(frozenset, ends))) != len(ends):
                bad.append(f"R-node {i} has parallel edges")
            elif len(verts) < 4 or nx.node_connectivity(G) < 3:
                bad.append(f"R-node {i} is not 3-connected")
        else:
            bad.append(f"node {i} has unknown kind {node.kind!r}")
    for p, c, _, _ in t.tree_edges():
        kp, kc = t.nodes[p].kind, t.nodes[c].kind
        if kp == kc and kp in (S_NODE, P_NODE):
            bad.append(f"adjacent {kp}-nodes {p} and {c}")
    return bad
