import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bubblescope.graph_model import BidirectedGraph, DirectedGraph, double, forward
from bubblescope.oracle import (
    GeneratorSpec,
    all_superbubbles_bruteforce,
    feedback_arcs_bruteforce,
    generate,
    is_superbubble_bruteforce,
)
from bubblescope.spqr import Expansion
from bubblescope.superbubble_finder import (
    Acyclic,
    BlockAnalysis,
    Hitters,
    Superbubble,
    TriState,
    _Context,
    _topo_order,
    feedback_arcs,
    find_all_superbubbles,
)


def _spec(seed, n_max=9):
    r = random.Random(seed)
    return GeneratorSpec(
        n_min=2,
        n_max=n_max,
        extra_edges=r.randint(0, 7),
        mode=r.choice(["any", "connected", "biconnected", "chain", "dag"]),
        directed=True,
        blocks=r.randint(1, 3),
        self_loops=True,
        seed=seed,
    )


def _pairs(bubbles):
    return {(b.entrance, b.exit) for b in bubbles}


def _named(g, bubbles):
    return {(g.names[b.entrance], g.names[b.exit]) for b in bubbles}


def test_fx4(fixtures):
    g = fixtures["fx4"].graph
    found = _named(g, find_all_superbubbles(g))
    assert ("s", "t") in found
    assert found == {("s", "t"), ("t", "u"), ("u", "s")}
    assert _pairs(find_all_superbubbles(g)) == all_superbubbles_bruteforce(g)


def test_fx5_feedback_arcs(fixtures):
    g = fixtures["fx5"].graph
    fb = feedback_arcs(g)
    assert isinstance(fb, Hitters)
    assert {(g.names[g.tails[a]], g.names[g.heads[a]]) for a in fb.arcs} == {("a", "b"), ("b", "c")}


def test_feedback_arcs_acyclic():
    g = DirectedGraph.from_arcs([("a", "b"), ("b", "c")])
    assert isinstance(feedback_arcs(g), Acyclic)


def test_feedback_arcs_two_disjoint_cycles():
    g = DirectedGraph.from_arcs([("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")])
    assert feedback_arcs(g) == Hitters(frozenset())


def test_diamond():
    g = DirectedGraph.from_arcs([("s", "a"), ("s", "b"), ("a", "t"), ("b", "t")])
    assert _named(g, find_all_superbubbles(g)) == {("s", "t")}


def test_three_cycle_has_trivial_bubbles():
    g = DirectedGraph.from_arcs([("a", "b"), ("b", "c"), ("c", "a")])
    assert _named(g, find_all_superbubbles(g)) == {("a", "b"), ("b", "c"), ("c", "a")}


def test_empty_graph():
    assert find_all_superbubbles(DirectedGraph([], [])) == []


def test_superbubble_ordering():
    assert sorted([Superbubble(2, 1), Superbubble(1, 3)]) == [Superbubble(1, 3), Superbubble(2, 1)]


def test_tristate():
    assert TriState.of(None) is TriState.NULL and TriState.of(True) is TriState.TRUE


def test_threads_argument_validated():
    with pytest.raises(ValueError):
        find_all_superbubbles(DirectedGraph([], []), threads=0)


def test_doubled_bubble_cycle():
    g = BidirectedGraph.from_pairs([("s+", "a-"), ("s+", "b-"), ("a+", "t-"), ("b+", "t-")])
    d = double(g)
    found = _named(d, find_all_superbubbles(d))
    assert ("s_fwd", "t_fwd") in found and ("t_rev", "s_rev") in found
    assert _pairs(find_all_superbubbles(d)) == all_superbubbles_bruteforce(d)


@given(st.integers(0, 1_000_000))
def test_matches_oracle(seed):
    g = generate(_spec(seed))
    if g.n_vertices > 12:
        return
    assert _pairs(find_all_superbubbles(g)) == all_superbubbles_bruteforce(g)


@given(st.integers(0, 1_000_000))
def test_reported_pairs_are_superbubbles(seed):
    g = generate(_spec(seed))
    if g.n_vertices > 12:
        return
    g = g.without_self_loops()
    for b in find_all_superbubbles(g):
        assert is_superbubble_bruteforce(g, b.entrance, b.exit)


@given(st.integers(0, 1_000_000))
def test_feedback_arcs_match_bruteforce(seed):
    g = generate(_spec(seed, n_max=8)).without_self_loops()
    expected = feedback_arcs_bruteforce(g)
    got = feedback_arcs(g)
    if expected is None:
        assert isinstance(got, Acyclic)
    else:
        assert got == Hitters(expected)


@given(st.integers(0, 1_000_000))
def test_doubled_graphs_match_oracle(seed):
    r = random.Random(seed)
    g = generate(GeneratorSpec(n_min=1, n_max=6, extra_edges=r.randint(0, 4), mode="connected", seed=seed))
    d = double(g)
    assert _pairs(find_all_superbubbles(d)) == all_superbubbles_bruteforce(d)


@given(st.integers(0, 1_000_000))
def test_edge_states_are_sound(seed):
    """Phase 1 and 2 states agree with the materialized expansion of every virtual edge."""
    r = random.Random(seed)
    spec = GeneratorSpec(
        n_min=4, n_max=9, extra_edges=r.randint(0, 6), mode=r.choice(["biconnected", "chain"]), directed=True, blocks=2, seed=seed
    )
    g = generate(spec).without_self_loops()
    ctx = _Context(g)
    for b, blk in enumerate(ctx.bct.blocks):
        if blk.kind != "biconnected":
            continue
        ba = BlockAnalysis(ctx, b)
        t = ba.tree
        if t.n_nodes < 2:
            continue
        ba.phase1()
        ba.phase2()
        for x in range(len(t.sk_u)):
            if t.sk_real[x] >= 0:
                continue
            ex = Expansion(t, x)
            s, u = t.sk_u[x], t.sk_v[x]
            verts = sorted(ex.vertices)
            loc = {w: k for k, w in enumerate(verts)}
            ids = sorted(ex.edge_ids)
            tails = [loc[ba.sub.eu[e]] for e in ids]
            heads = [loc[ba.sub.ev[e]] for e in ids]
            noext = all(not ba.ext[w] for w in verts if w not in (s, u))
            acyc = (_topo_order(len(verts), tails, heads) is not None) if noext else None
            st_reach = None
            if acyc:
                adj = {}
                for a, c in zip(tails, heads):
                    adj.setdefault(a, []).append(c)
                seen, stack = {loc[s]}, [loc[s]]
                while stack:
                    for c in adj.get(stack.pop(), []):
                        if c not in seen:
                            seen.add(c)
                            stack.append(c)
                st_reach = loc[u] in seen
            es = ba.state(x)
            assert (es.no_extremity, es.acyclic, es.reaches_st) == (noext, TriState.of(acyc), TriState.of(st_reach))
