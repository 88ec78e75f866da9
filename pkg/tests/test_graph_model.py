import pytest
from hypothesis import given
from hypothesis import strategies as st

from bubblescope.graph_model import (
    MINUS,
    PLUS,
    BidirectedGraph,
    DirectedGraph,
    Incidence,
    Sign,
    double,
    forward,
    reverse,
    split,
    tips,
    underlying,
)


def fx1():
    return BidirectedGraph.from_pairs([("s+", "a-"), ("s+", "b-"), ("a+", "t-"), ("b+", "t-")])


def test_sign_opposite_is_involution():
    for s in Sign:
        assert s.opposite.opposite is s
    assert PLUS.opposite is MINUS


def test_sign_from_char_rejects_garbage():
    with pytest.raises(ValueError):
        Sign.from_char("x")


def test_parallel_edges_are_deduplicated():
    g = BidirectedGraph.from_pairs([("a+", "b-"), ("b-", "a+"), ("a+", "b+")])
    assert g.n_edges == 2


def test_parallel_arcs_are_deduplicated():
    g = DirectedGraph.from_arcs([("a", "b"), ("a", "b"), ("b", "a")])
    assert g.n_arcs == 2


def test_adjacency_index_matches_edges():
    g = fx1()
    for v in range(g.n_vertices):
        for s in Sign:
            for e in g.incident_edges(v, s):
                assert Incidence(v, s) in g.edges[e]


def test_underlying_keeps_parallel_edges():
    g = BidirectedGraph.from_pairs([("a+", "b-"), ("a-", "b+")])
    h = underlying(g)
    assert h.n_edges == 2 and sorted(zip(h.eu, h.ev)) == [(0, 1), (0, 1)]


def test_split_tip_leaves_isolated_copy():
    g = fx1()
    t = g.vertex_id("t")
    g2, new = split(g, Incidence(t, MINUS))
    assert g2.degree(t, MINUS) == 2
    assert g2.degree(new) == 0


def test_split_fx2_moves_minus_incidences():
    g = BidirectedGraph.from_pairs(
        [("u+", "x1-"), ("x1+", "v-"), ("u+", "x2-"), ("x2+", "v-"), ("u+", "x3-"), ("x3+", "v-"), ("u-", "y-"), ("y+", "v+")]
    )
    u = g.vertex_id("u")
    g2, new = split(g, Incidence(u, PLUS))
    assert g2.degree(u, PLUS) == 3 and g2.degree(u, MINUS) == 0
    assert g2.degree(new, MINUS) == 1


def test_split_unknown_vertex():
    with pytest.raises(ValueError):
        split(fx1(), Incidence(99, PLUS))


def test_tips_of_fx1():
    g = fx1()
    assert tips(g) == {g.inc("s+"), g.inc("t-")}


def test_double_fx1_is_two_mirrored_diamonds():
    g = fx1()
    d = double(g)
    assert d.n_vertices == 8 and d.n_arcs == 8
    s, t = g.vertex_id("s"), g.vertex_id("t")
    assert d.has_arc(forward(s), reverse(g.vertex_id("a"))) is False
    assert d.names[forward(s)] == "s_fwd"
    # s+ -> a- means leaving s forwards and entering a forwards
    assert d.has_arc(forward(s), forward(g.vertex_id("a")))
    assert d.has_arc(reverse(g.vertex_id("a")), reverse(s))
    assert d.has_arc(forward(g.vertex_id("b")), forward(t))


signs = st.sampled_from(["+", "-"])


@st.composite
def small_bidirected(draw):
    n = draw(st.integers(1, 6))
    names = [f"v{i}" for i in range(n)]
    m = draw(st.integers(0, 10))
    pairs = [
        (draw(st.sampled_from(names)) + draw(signs), draw(st.sampled_from(names)) + draw(signs)) for _ in range(m)
    ]
    return BidirectedGraph.from_pairs(pairs, vertices=names)


@given(small_bidirected())
def test_double_arc_count(g):
    d = double(g)
    loops = sum(1 for a, b in g.edges if a == b)
    # an edge joining an incidence to itself yields one arc twice
    assert d.n_arcs == 2 * g.n_edges - loops


@given(small_bidirected(), st.data())
def test_split_preserves_edge_count_and_degree(g, data):
    v = data.draw(st.integers(0, g.n_vertices - 1))
    s = data.draw(st.sampled_from(list(Sign)))
    g2, new = split(g, Incidence(v, s))
    assert g2.n_edges == g.n_edges
    assert g2.degree(v) + g2.degree(new) == g.degree(v)
    assert g2.degree(v, s.opposite) == 0
