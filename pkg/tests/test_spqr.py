import pytest
from hypothesis import given
from hypothesis import strategies as st

from _checks import simple_biconnected, spqr_violations
from bubblescope.graph_model import UndirectedMultigraph
from bubblescope.oracle import (
    GeneratorSpec,
    generate,
    separation_pairs_bruteforce,
    spqr_canonical,
    spqr_reference,
)
from bubblescope.spqr import P_NODE, R_NODE, S_NODE, NotBiconnectedError, build_spqr, expansion, separation_pairs


def _h(n, pairs):
    return UndirectedMultigraph(n, [a for a, _ in pairs], [b for _, b in pairs], list(range(len(pairs))))


def test_cycle_is_single_s_node():
    t = build_spqr(_h(5, [(i, (i + 1) % 5) for i in range(5)]))
    assert [n.kind for n in t.nodes] == [S_NODE]
    assert sorted(t.nodes[0].cycle) == list(range(5))


def test_bond_is_single_p_node():
    t = build_spqr(_h(2, [(0, 1)] * 4))
    assert [n.kind for n in t.nodes] == [P_NODE]


def test_k4_is_single_r_node():
    pairs = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    t = build_spqr(_h(4, pairs))
    assert [n.kind for n in t.nodes] == [R_NODE]
    assert list(separation_pairs(t)) == []


def test_double_k4_is_two_r_nodes():
    # FX3's underlying graph: K4 on a,b,c,d minus b-d, glued with K4 on b,d,e,f minus b-d
    a, b, c, d, e, f = range(6)
    pairs = [(b, a), (b, c), (a, d), (c, d), (a, c), (b, e), (b, f), (e, d), (f, d), (e, f)]
    t = build_spqr(_h(6, pairs))
    assert sorted(n.kind for n in t.nodes) == [R_NODE, R_NODE]
    assert set(separation_pairs(t)) == {(b, d)}


def test_not_biconnected_rejected():
    with pytest.raises(NotBiconnectedError):
        build_spqr(_h(3, [(0, 1), (1, 2)]))


def test_expansion_of_virtual_edge_partitions_edges():
    a, b, c, d, e, f = range(6)
    pairs = [(b, a), (b, c), (a, d), (c, d), (a, c), (b, e), (b, f), (e, d), (f, d), (e, f)]
    t = build_spqr(_h(6, pairs))
    virt = [x for x in range(len(t.sk_real)) if t.sk_real[x] < 0]
    x = virt[0]
    y = t.sk_twin[x]
    ex, ey = expansion(t, x), expansion(t, y)
    assert ex.edge_ids | ey.edge_ids == frozenset(range(10))
    assert not ex.edge_ids & ey.edge_ids
    assert ex.vertices & ey.vertices == {b, d}


@given(st.integers(0, 100_000))
def test_invariants_on_random_blocks(seed):
    g = generate(GeneratorSpec(n_min=2, n_max=10, extra_edges=6, mode="biconnected", seed=seed))
    from bubblescope.graph_model import underlying

    h = underlying(g)
    if h.n_edges < 3:
        return
    assert spqr_violations(build_spqr(h)) == []


@given(st.integers(0, 100_000))
def test_separation_pairs_match_bruteforce(seed):
    g = generate(GeneratorSpec(n_min=3, n_max=10, extra_edges=5, mode="biconnected", seed=seed))
    h = simple_biconnected(g)
    if h is None:
        return
    assert set(separation_pairs(build_spqr(h))) == separation_pairs_bruteforce(h)


@given(st.integers(0, 100_000))
def test_matches_reference_decomposition(seed):
    g = generate(GeneratorSpec(n_min=2, n_max=8, extra_edges=5, mode="biconnected", seed=seed))
    from bubblescope.graph_model import underlying

    h = underlying(g)
    if h.n_edges < 3:
        return
    assert spqr_canonical(build_spqr(h)) == spqr_canonical(spqr_reference(h))


def test_skeleton_size_is_linear():
    g = generate(GeneratorSpec(n_min=40, n_max=40, extra_edges=60, mode="biconnected", seed=3))
    from bubblescope.graph_model import underlying

    h = underlying(g)
    t = build_spqr(h)
    assert len(t.sk_real) <= 3 * h.n_edges
