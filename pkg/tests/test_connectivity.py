import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bubblescope.connectivity import (
    LOOP,
    MULTI_BRIDGE,
    block_cut_tree,
    sign_consistent_vertices,
    sign_cut_graphs,
)
from bubblescope.graph_model import BidirectedGraph, Incidence, Sign, UndirectedMultigraph, split, underlying
from bubblescope.oracle import GeneratorSpec, blocks_bruteforce, cutvertices_bruteforce, generate


def _nx(h):
    G = nx.Graph()
    G.add_nodes_from(range(h.n))
    G.add_edges_from((u, v) for u, v in zip(h.eu, h.ev) if u != v)
    return G


@given(st.integers(0, 100_000))
def test_cutvertices_match_networkx(seed):
    g = generate(GeneratorSpec(n_min=1, n_max=12, extra_edges=6, mode="any", seed=seed, self_loops=True))
    h = underlying(g)
    bct = block_cut_tree(h)
    assert set(bct.cutvertices) == set(nx.articulation_points(_nx(h)))


@given(st.integers(0, 100_000))
def test_blocks_match_networkx_vertex_sets(seed):
    g = generate(GeneratorSpec(n_min=1, n_max=12, extra_edges=6, mode="any", seed=seed))
    h = underlying(g)
    bct = block_cut_tree(h)
    ours = sorted(sorted(b.vertices) for b in bct.blocks if b.kind != LOOP)
    theirs = sorted(sorted(c) for c in nx.biconnected_components(_nx(h)))
    assert ours == theirs


@given(st.integers(0, 100_000))
def test_block_edges_match_bruteforce(seed):
    g = generate(GeneratorSpec(n_min=2, n_max=8, extra_edges=5, mode="connected", seed=seed))
    h = underlying(g)
    bct = block_cut_tree(h)
    assert {frozenset(b.edges) for b in bct.blocks} == blocks_bruteforce(h)
    assert set(bct.cutvertices) == cutvertices_bruteforce(h)


def test_every_edge_in_exactly_one_block():
    h = UndirectedMultigraph(4, [0, 1, 1, 2, 2], [1, 2, 2, 3, 2], [0, 1, 2, 3, 4])
    bct = block_cut_tree(h)
    assert all(b >= 0 for b in bct.edge_block)
    kinds = sorted(b.kind for b in bct.blocks)
    assert kinds == sorted([MULTI_BRIDGE, MULTI_BRIDGE, MULTI_BRIDGE, LOOP])
    assert bct.cutvertices == [1, 2]


def _bowtie():
    # two triangles glued at c; c has only + incidences on one side and only - on the other
    return BidirectedGraph.from_pairs(
        [("c+", "a-"), ("a+", "b-"), ("b+", "c+"), ("c-", "d+"), ("d-", "e+"), ("e-", "c-")]
    )


def test_sign_consistent_bowtie():
    g = _bowtie()
    assert sign_consistent_vertices(g) == {g.vertex_id("c")}


def test_mixed_cutvertex_not_consistent():
    g = BidirectedGraph.from_pairs(
        [("c+", "a-"), ("a+", "b-"), ("b+", "c-"), ("c-", "d+"), ("d-", "e+"), ("e-", "c-")]
    )
    assert sign_consistent_vertices(g) == set()


def test_sign_cut_graphs_split_bowtie():
    g = _bowtie()
    parts = [p for p in sign_cut_graphs(g) if not p.isolated]
    assert len(parts) == 2
    c = g.vertex_id("c")
    assert sorted(p.split[c] for p in parts) == [Sign.PLUS, Sign.MINUS]
    for p in parts:
        assert Incidence(c, p.split[c]) in p.tips()


def _components_after_splitting(g, consistent):
    """Reference: split every sign-consistent vertex one by one, return edge-id components."""
    cur = g
    for v in sorted(consistent):
        cur, _ = split(cur, Incidence(v, Sign.PLUS))
    h = underlying(cur)
    G = nx.MultiGraph()
    G.add_nodes_from(range(h.n))
    for e, (u, v) in enumerate(zip(h.eu, h.ev)):
        G.add_edge(u, v, key=e)
    comps = []
    for comp in nx.connected_components(G):
        es = frozenset(k for u, v, k in G.subgraph(comp).edges(keys=True))
        if es:
            comps.append(es)
    return set(comps)


@given(st.integers(0, 100_000))
def test_sign_cut_graphs_match_explicit_splitting(seed):
    g = generate(GeneratorSpec(n_min=2, n_max=4, extra_edges=2, mode="chain", blocks=3, seed=seed))
    consistent = sign_consistent_vertices(g)
    ours = {frozenset(p.edges) for p in sign_cut_graphs(g) if p.edges}
    assert ours == _components_after_splitting(g, consistent)


def test_isolated_vertex_is_its_own_component():
    g = BidirectedGraph(["x", "y", "z"], [(Incidence(0, Sign.PLUS), Incidence(1, Sign.MINUS))])
    parts = sign_cut_graphs(g)
    assert any(p.isolated and p.vertices == [2] for p in parts)
