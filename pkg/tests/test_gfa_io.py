import pytest
from hypothesis import given
from hypothesis import strategies as st

from bubblescope.gfa_io import (
    GfaError,
    parse_corpus,
    parse_gfa,
    parse_snarl_report,
    parse_superbubbles,
    to_bidirected,
    to_directed,
    write_gfa,
    write_snarl_report,
    write_superbubbles,
)
from bubblescope.graph_model import BidirectedGraph, DirectedGraph, Sign
from bubblescope.oracle import GeneratorSpec, generate
from bubblescope.snarl_finder import find_all_snarls
from bubblescope.superbubble_finder import find_all_superbubbles

FX1_GFA = "H\tVN:Z:1.0\nS\ts\tACGT\nS\ta\t*\nS\tb\t*\nS\tt\t*\nL\ts\t+\ta\t+\t0M\nL\ts\t+\tb\t+\t*\nL\ta\t+\tt\t+\t0M\nL\tb\t+\tt\t+\t0M\nP\tp1\ts+,a+,t+\t*\n"


def test_parse_counts_ignored_records():
    doc = parse_gfa(FX1_GFA)
    assert list(doc.segments) == ["s", "a", "b", "t"]
    assert len(doc.links) == 4
    assert doc.ignored == 2
    assert doc.segments["s"].length == 4


def test_link_orientation_mapping():
    g = to_bidirected(parse_gfa("S\tx\t*\nS\ty\t*\nL\tx\t+\ty\t+\t0M\nL\tx\t-\ty\t-\t0M\nL\tx\t+\ty\t-\t0M\n"))
    got = {frozenset(map(g.render, e)) for e in g.edges}
    assert got == {frozenset({"x+", "y-"}), frozenset({"x-", "y+"}), frozenset({"x+", "y+"})}


def test_non_blunt_overlap_rejected_with_line():
    with pytest.raises(GfaError, match="bluntify") as ei:
        parse_gfa("S\tx\t*\nS\ty\t*\nL\tx\t+\ty\t+\t5M\n")
    assert ei.value.line == 3


def test_undeclared_segment_is_named():
    with pytest.raises(GfaError, match="'zz'"):
        parse_gfa("S\tx\t*\nL\tx\t+\tzz\t+\t0M\n")


def test_links_may_precede_segments():
    doc = parse_gfa("L\tx\t+\ty\t+\t0M\nS\tx\t*\nS\ty\t*\n")
    assert len(doc.links) == 1


@pytest.mark.parametrize(
    "text",
    ["S\tx\n", "L\tx\t+\ty\n", "S\tx\t*\nS\ty\t*\nL\tx\t?\ty\t+\t0M\n", "S\tx\t*\nS\tx\t*\n"],
)
def test_malformed_lines(text):
    with pytest.raises(GfaError):
        parse_gfa(text)


def test_empty_input():
    doc = parse_gfa("")
    assert to_bidirected(doc).n_vertices == 0


def test_directed_rejects_minus_links():
    with pytest.raises(GfaError, match="--double"):
        to_directed(parse_gfa("S\tx\t*\nS\ty\t*\nL\tx\t-\ty\t+\t0M\n"))


def test_fx1_report_text():
    g = to_bidirected(parse_gfa(FX1_GFA))
    assert write_snarl_report(find_all_snarls(g), g.names) == "T 1 s+ t-\nS a+ b+\nS a- b-\n"


def test_report_sorting_by_name_then_sign():
    g = BidirectedGraph.from_pairs([("b-", "a+")])
    from bubblescope.snarl_finder import SnarlRepresentation

    rep = SnarlRepresentation([], [(g.inc("b-"), g.inc("a+"))])
    assert write_snarl_report(rep, g.names) == "S a+ b-\n"


def test_superbubble_line_format():
    g = DirectedGraph.from_arcs([("s", "a"), ("s", "b"), ("a", "t"), ("b", "t")])
    assert write_superbubbles(find_all_superbubbles(g), g.names) == "s t\n"


@given(st.integers(0, 10_000))
def test_snarl_report_round_trip(seed):
    g = generate(GeneratorSpec(n_min=2, n_max=9, extra_edges=5, mode="connected", seed=seed))
    rep = find_all_snarls(g)
    text = write_snarl_report(rep, g.names)
    back = parse_snarl_report(text, g.names)
    assert back.tip_sets == rep.tip_sets and back.pairs == rep.pairs
    assert write_snarl_report(back, g.names) == text


@given(st.integers(0, 10_000))
def test_superbubble_round_trip(seed):
    g = generate(GeneratorSpec(n_min=2, n_max=9, extra_edges=4, mode="dag", directed=True, seed=seed))
    bubbles = find_all_superbubbles(g)
    assert parse_superbubbles(write_superbubbles(bubbles, g.names), g.names) == bubbles


@given(st.integers(0, 10_000))
def test_gfa_round_trip(seed):
    g = generate(GeneratorSpec(n_min=1, n_max=8, extra_edges=5, mode="any", seed=seed))
    g2 = to_bidirected(parse_gfa(write_gfa(g)))
    assert g2.names == g.names
    assert sorted(map(sorted, g2.edges)) == sorted(map(sorted, g.edges))


def test_corpus_parsing(fixtures):
    assert set(fixtures) == {"fx1", "fx2", "fx3", "fx4", "fx5"}
    fx4 = fixtures["fx4"]
    assert fx4.directed and fx4.graph.n_arcs == 9
    assert fixtures["fx3"].graph.n_edges == 10
    assert "T 1 s+ t-" in fixtures["fx1"].expect["snarls"]


def test_corpus_errors():
    with pytest.raises(GfaError):
        parse_corpus("E a + b -\n")
    with pytest.raises(GfaError):
        parse_corpus("@graph g bidirected\nA a b\n@end\n")
    with pytest.raises(GfaError):
        parse_corpus("@graph g weird\n")


def test_corpus_sign_chars():
    (e,) = parse_corpus("@graph g bidirected\nE a + b -\n@end\n")
    assert e.graph.edges[0][1].sign is Sign.MINUS
