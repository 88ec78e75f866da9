"""GFA ingestion and the plain-text report formats.

Only blunt GFA 1.x is accepted: ``S`` and ``L`` records are read, every
other record type is counted and skipped.  A link ``L a oa b ob`` joins the
end of ``a`` (as oriented by ``oa``) to the start of ``b``; in bidirected
terms that is the edge ``{a d_a, b d_b}`` with ``d_a = +`` iff ``oa = +``
and ``d_b = -`` iff ``ob = +``.

Report formats (space separated, one record per line, sorted):

* snarls: ``T <k> <inc> <inc> ...`` per tip set and ``S <inc> <inc>`` per
  explicit pair, where an incidence is written ``<name><sign>``;
* superbubbles: ``<entrance> <exit>``.

The test corpus bundles graphs and expected outputs in one file::

    @graph fx1 bidirected
    E s + a -
    @expect snarls
    T 1 s+ t-
    @end
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from .graph_model import BidirectedGraph, DirectedGraph, Incidence, Sign, parse_incidence_token
from .snarl_finder import Pair, SnarlRepresentation
from .superbubble_finder import Superbubble


class GfaError(ValueError):
    """Malformed or unsupported input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class Segment:
    name: str
    length: int | None = None
    line: int = 0


@dataclass
class Link:
    from_name: str
    from_orient: str
    to_name: str
    to_orient: str
    overlap: str = "*"
    line: int = 0


@dataclass
class GfaDocument:
    segments: dict[str, Segment] = field(default_factory=dict)
    links: list[Link] = field(default_factory=list)
    #: number of records of other types (H, P, W, ...) that were skipped
    ignored: int = 0


_BLUNT = re.compile(r"^(\*|(0[MIDNSHP=X])*|0)$")


def _as_text(src: str | TextIO) -> TextIO:
    return io.StringIO(src) if isinstance(src, str) else src


def parse_gfa(src: str | TextIO) -> GfaDocument:
    """Parse GFA text (a string or an open text stream)."""
    doc = GfaDocument()
    for lineno, raw in enumerate(_as_text(src), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t") if "\t" in line else line.split()
        kind = fields[0]
        if kind == "S":
            if len(fields) < 3:
                raise GfaError("S record needs a name and a sequence field", lineno)
            name = fields[1]
            if name in doc.segments:
                raise GfaError(f"segment {name!r} declared twice", lineno)
            length = None if fields[2] == "*" else len(fields[2])
            for tag in fields[3:]:
                if tag.startswith("LN:i:"):
                    length = int(tag[5:])
            doc.segments[name] = Segment(name, length, lineno)
        elif kind == "L":
            if len(fields) < 5:
                raise GfaError("L record needs from, orientation, to, orientation", lineno)
            a, oa, b, ob = fields[1:5]
            overlap = fields[5] if len(fields) > 5 else "*"
            for o in (oa, ob):
                if o not in ("+", "-"):
                    raise GfaError(f"bad orientation {o!r}", lineno)
            if not _BLUNT.match(overlap):
                raise GfaError(
                    f"link {a}{oa} -> {b}{ob} has overlap {overlap}; only blunt graphs are supported, "
                    "bluntify the graph first",
                    lineno,
                )
            doc.links.append(Link(a, oa, b, ob, overlap, lineno))
        else:
            doc.ignored += 1
    for ln in doc.links:
        for nm in (ln.from_name, ln.to_name):
            if nm not in doc.segments:
                raise GfaError(f"link references undeclared segment {nm!r}", ln.line)
    return doc


def to_bidirected(doc: GfaDocument) -> BidirectedGraph:
    names = list(doc.segments)
    index = {nm: i for i, nm in enumerate(names)}
    edges = []
    for ln in doc.links:
        da = Sign.PLUS if ln.from_orient == "+" else Sign.MINUS
        db = Sign.MINUS if ln.to_orient == "+" else Sign.PLUS
        edges.append((Incidence(index[ln.from_name], da), Incidence(index[ln.to_name], db)))
    return BidirectedGraph(names, edges)


def to_directed(doc: GfaDocument) -> DirectedGraph:
    names = list(doc.segments)
    index = {nm: i for i, nm in enumerate(names)}
    arcs = []
    for ln in doc.links:
        if ln.from_orient != "+" or ln.to_orient != "+":
            raise GfaError(
                "link with a '-' orientation in directed mode; use the snarls pipeline "
                "or --double to run on the doubled graph",
                ln.line,
            )
        arcs.append((index[ln.from_name], index[ln.to_name]))
    return DirectedGraph(names, arcs)


def write_gfa(g: BidirectedGraph | DirectedGraph) -> str:
    """Blunt GFA text for ``g`` (segments without sequence)."""
    out = [f"S\t{nm}\t*" for nm in g.names]
    if isinstance(g, DirectedGraph):
        for u, v in g.arcs:
            out.append(f"L\t{g.names[u]}\t+\t{g.names[v]}\t+\t0M")
    else:
        for a, b in g.edges:
            oa = "+" if a.sign is Sign.PLUS else "-"
            ob = "+" if b.sign is Sign.MINUS else "-"
            out.append(f"L\t{g.names[a.vertex]}\t{oa}\t{g.names[b.vertex]}\t{ob}\t0M")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# reports


def _key(names: Sequence[str], i: Incidence) -> tuple[str, int]:
    return (names[i.vertex], int(i.sign))


def _render(names: Sequence[str], i: Incidence) -> str:
    return names[i.vertex] + i.sign.char


def _sorted_pair(names, p: Pair) -> list[Incidence]:
    return sorted(p, key=lambda i: _key(names, i))


def write_snarl_report(rep: SnarlRepresentation, names: Sequence[str]) -> str:
    tsets = [sorted(ts, key=lambda i: _key(names, i)) for ts in rep.tip_sets if ts]
    tsets.sort(key=lambda ts: [_key(names, i) for i in ts])
    lines = [f"T {k} " + " ".join(_render(names, i) for i in ts) for k, ts in enumerate(tsets, start=1)]
    pairs = [_sorted_pair(names, p) for p in rep.pairs]
    pairs.sort(key=lambda p: [_key(names, i) for i in p])
    lines += ["S " + " ".join(_render(names, i) for i in p) for p in pairs]
    return "".join(line + "\n" for line in lines)


def write_snarl_pairs(pairs: Iterable[Pair], names: Sequence[str]) -> str:
    """Expanded form: one ``S`` line per snarl, tip-set pairs included."""
    rows = {tuple(_sorted_pair(names, p)) for p in pairs}
    ordered = sorted(rows, key=lambda p: [_key(names, i) for i in p])
    return "".join("S " + " ".join(_render(names, i) for i in p) + "\n" for p in ordered)


def _name_index(names: Sequence[str]) -> dict[str, int]:
    return {nm: i for i, nm in enumerate(names)}


def _parse_inc(tok: str, index: dict[str, int], lineno: int) -> Incidence:
    try:
        nm, s = parse_incidence_token(tok)
        return Incidence(index[nm], s)
    except (KeyError, ValueError) as exc:
        raise GfaError(f"bad incidence {tok!r}", lineno) from exc


def parse_snarl_report(src: str | TextIO, names: Sequence[str]) -> SnarlRepresentation:
    index = _name_index(names)
    rep = SnarlRepresentation()
    for lineno, raw in enumerate(_as_text(src), start=1):
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "T" and len(parts) >= 3:
            rep.tip_sets.append(tuple(sorted(_parse_inc(t, index, lineno) for t in parts[2:])))
        elif parts[0] == "S" and len(parts) == 3:
            a, b = (_parse_inc(t, index, lineno) for t in parts[1:])
            rep.pairs.append((a, b) if a <= b else (b, a))
        else:
            raise GfaError(f"unrecognized report line {raw.strip()!r}", lineno)
    rep.tip_sets.sort()
    rep.pairs.sort()
    return rep


def write_superbubbles(bubbles: Iterable[Superbubble | tuple[int, int]], names: Sequence[str]) -> str:
    rows = sorted({(names[b[0]], names[b[1]]) if isinstance(b, tuple) else (names[b.entrance], names[b.exit]) for b in bubbles})
    return "".join(f"{s} {t}\n" for s, t in rows)


def parse_superbubbles(src: str | TextIO, names: Sequence[str]) -> list[Superbubble]:
    index = _name_index(names)
    out = []
    for lineno, raw in enumerate(_as_text(src), start=1):
        parts = raw.split()
        if not parts:
            continue
        if len(parts) != 2 or parts[0] not in index or parts[1] not in index:
            raise GfaError(f"bad superbubble line {raw.strip()!r}", lineno)
        out.append(Superbubble(index[parts[0]], index[parts[1]]))
    return sorted(out)


# ---------------------------------------------------------------------------
# corpus files


@dataclass
class CorpusEntry:
    name: str
    graph: BidirectedGraph | DirectedGraph
    #: expected report text keyed by ``"snarls"`` or ``"superbubbles"``
    expect: dict[str, str] = field(default_factory=dict)
    line: int = 0

    @property
    def directed(self) -> bool:
        return isinstance(self.graph, DirectedGraph)


def parse_corpus(src: str | TextIO) -> list[CorpusEntry]:
    entries: list[CorpusEntry] = []
    cur = None
    section = None

    def finish():
        nonlocal cur
        if cur is None:
            return
        name, kind, verts, items, expect, line = cur
        index: dict[str, int] = {}
        for v in verts:
            index.setdefault(v, len(index))
        if kind == "directed":
            for a, b in items:
                index.setdefault(a, len(index))
                index.setdefault(b, len(index))
            g = DirectedGraph(list(index), [(index[a], index[b]) for a, b in items])
        else:
            for (a, _), (b, _) in items:
                index.setdefault(a, len(index))
                index.setdefault(b, len(index))
            g = BidirectedGraph(
                list(index), [(Incidence(index[a], sa), Incidence(index[b], sb)) for (a, sa), (b, sb) in items]
            )
        entries.append(CorpusEntry(name, g, {k: "".join(v) for k, v in expect.items()}, line))
        cur = None

    for lineno, raw in enumerate(_as_text(src), start=1):
        line = raw.strip()
        if not line or (line.startswith("#") and section is None):
            continue
        parts = line.split()
        if parts[0] == "@graph":
            finish()
            if len(parts) != 3 or parts[2] not in ("bidirected", "directed"):
                raise GfaError("expected '@graph NAME bidirected|directed'", lineno)
            cur = (parts[1], parts[2], [], [], {}, lineno)
            section = None
        elif cur is None:
            raise GfaError("record outside a @graph block", lineno)
        elif parts[0] == "@expect":
            if len(parts) != 2 or parts[1] not in ("snarls", "superbubbles"):
                raise GfaError("expected '@expect snarls|superbubbles'", lineno)
            section = parts[1]
            cur[4][section] = []
        elif parts[0] == "@end":
            finish()
            section = None
        elif section is not None:
            cur[4][section].append(line + "\n")
        elif parts[0] == "V":
            cur[2].extend(parts[1:])
        elif parts[0] == "E" and cur[1] == "bidirected" and len(parts) == 5:
            try:
                cur[3].append(((parts[1], Sign.from_char(parts[2])), (parts[3], Sign.from_char(parts[4]))))
            except ValueError as exc:
                raise GfaError(str(exc), lineno) from exc
        elif parts[0] == "A" and cur[1] == "directed" and len(parts) == 3:
            cur[3].append((parts[1], parts[2]))
        else:
            raise GfaError(f"unrecognized corpus line {line!r}", lineno)
    finish()
    return entries
