"""Readers and writers for edge-list, DIMACS ``.col`` and METIS graph files."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from pathlib import Path

from .graph import Graph

log = logging.getLogger(__name__)


class GraphFormat(str, enum.Enum):
    EDGE = "edge"
    COL = "col"
    METIS = "metis"

    @classmethod
    def parse(cls, tag: "str | GraphFormat") -> "GraphFormat":
        if isinstance(tag, GraphFormat):
            return tag
        aliases = {"edge": cls.EDGE, "edge-list": cls.EDGE, "edgelist": cls.EDGE,
                   "col": cls.COL, "dimacs": cls.COL, "dimacs-col": cls.COL,
                   "metis": cls.METIS, "graph": cls.METIS}
        try:
            return aliases[tag.lower()]
        except KeyError:
            raise ValueError(f"unknown graph format {tag!r}") from None

    @classmethod
    def guess(cls, path: str | Path) -> "GraphFormat":
        suffix = Path(path).suffix.lower()
        return {".col": cls.COL, ".clq": cls.COL, ".graph": cls.METIS,
                ".metis": cls.METIS}.get(suffix, cls.EDGE)


class GraphParseError(ValueError):
    def __init__(self, msg: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(msg if lineno is None else f"line {lineno}: {msg}")


@dataclass
class ParseReport:
    """Irregularities tolerated while reading a graph file."""

    self_loops: int = 0
    duplicate_edges: int = 0


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphParseError(f"expected an integer, got {tok!r}", lineno) from None


def _lines(text: str | bytes):
    if isinstance(text, bytes):
        text = text.decode()
    for lineno, line in enumerate(text.splitlines(), start=1):
        yield lineno, line.strip()


class _EdgeCollector:
    def __init__(self, n: int | None):
        self.n = n
        self.edges: set[tuple[int, int]] = set()
        self.report = ParseReport()
        self.max_node = 0

    def add(self, u: int, v: int, lineno: int, count_duplicates=True) -> None:
        for x in (u, v):
            if x < 1 or (self.n is not None and x > self.n):
                bound = "" if self.n is None else f"..{self.n}"
                raise GraphParseError(f"node {x} outside declared range 1{bound}", lineno)
        self.max_node = max(self.max_node, u, v)
        if u == v:
            self.report.self_loops += 1
            return
        e = (u, v) if u < v else (v, u)
        if e in self.edges:
            if count_duplicates:
                self.report.duplicate_edges += 1
            return
        self.edges.add(e)

    def graph(self) -> Graph:
        if self.report.self_loops or self.report.duplicate_edges:
            log.warning("dropped %d self-loops and %d duplicate edges",
                        self.report.self_loops, self.report.duplicate_edges)
        n = self.max_node if self.n is None else self.n
        return Graph.from_edges(n, self.edges)


def _parse_edge_list(text) -> _EdgeCollector:
    col = _EdgeCollector(None)
    declared_n = None
    for lineno, line in _lines(text):
        if line.startswith("#"):
            toks = line[1:].split()
            # "# n <count>" keeps isolated high-numbered nodes across a round trip
            if len(toks) == 2 and toks[0] == "n" and declared_n is None and not col.edges:
                declared_n = _int(toks[1], lineno)
                col.n = declared_n
            continue
        if not line or line[0] in "%c":
            continue
        toks = line.split()
        if len(toks) < 2:
            raise GraphParseError("expected 'u v'", lineno)
        col.add(_int(toks[0], lineno), _int(toks[1], lineno), lineno)
    return col


def _parse_col(text) -> _EdgeCollector:
    col = None
    for lineno, line in _lines(text):
        if not line or line[0] == "c":
            continue
        toks = line.split()
        if toks[0] == "p":
            if col is not None:
                raise GraphParseError("duplicate 'p' line", lineno)
            if len(toks) != 4 or toks[1] not in ("edge", "col"):
                raise GraphParseError("expected 'p edge <n> <m>'", lineno)
            col = _EdgeCollector(_int(toks[2], lineno))
        elif toks[0] == "e":
            if col is None:
                raise GraphParseError("edge line before 'p' line", lineno)
            if len(toks) != 3:
                raise GraphParseError("expected 'e <u> <v>'", lineno)
            col.add(_int(toks[1], lineno), _int(toks[2], lineno), lineno)
        else:
            raise GraphParseError(f"unexpected line type {toks[0]!r}", lineno)
    if col is None:
        raise GraphParseError("missing 'p edge <n> <m>' line")
    return col


def _parse_metis(text) -> _EdgeCollector:
    col = None
    declared_m = 0
    node = 0
    header_line = None
    for lineno, raw in _lines(text):
        if raw.startswith("%"):
            continue
        if col is None:
            if not raw:
                continue
            toks = raw.split()
            if len(toks) < 2:
                raise GraphParseError("expected METIS header '<n> <m>'", lineno)
            if len(toks) > 2 and toks[2].strip("0"):
                raise GraphParseError("weighted METIS files are not supported", lineno)
            col = _EdgeCollector(_int(toks[0], lineno))
            declared_m = _int(toks[1], lineno)
            header_line = lineno
            continue
        # blank lines after the header are isolated nodes until all n are read
        node += 1
        if node > col.n:
            if raw:
                raise GraphParseError(f"more than {col.n} adjacency lines", lineno)
            continue
        for tok in raw.split():
            # every edge appears twice in METIS, so repeats are not duplicates
            col.add(node, _int(tok, lineno), lineno, count_duplicates=False)
    if col is None:
        raise GraphParseError("missing METIS header")
    if node < col.n:
        raise GraphParseError(f"expected {col.n} adjacency lines, found {node}")
    if len(col.edges) != declared_m:
        raise GraphParseError(
            f"header declares m={declared_m} but adjacency lists give {len(col.edges)} edges",
            header_line)
    return col


_PARSERS = {GraphFormat.EDGE: _parse_edge_list, GraphFormat.COL: _parse_col,
            GraphFormat.METIS: _parse_metis}


def parse_graph_report(text: str | bytes, fmt: "GraphFormat | str") -> tuple[Graph, ParseReport]:
    col = _PARSERS[GraphFormat.parse(fmt)](text)
    return col.graph(), col.report


def parse_graph(text: str | bytes, fmt: "GraphFormat | str") -> Graph:
    """Parse ``text`` in the given format.

    Duplicate edges and self-loops are dropped (with a logged warning);
    syntax errors raise :class:`GraphParseError` carrying the line number.
    """
    return parse_graph_report(text, fmt)[0]


def write_graph(g: Graph, fmt: "GraphFormat | str") -> str:
    fmt = GraphFormat.parse(fmt)
    edges = g.sorted_edges()
    if fmt is GraphFormat.EDGE:
        out = [f"{u} {v}" for u, v in edges]
        if g.n and (not edges or max(edges, key=lambda e: e[1])[1] < g.n):
            # isolated trailing nodes would otherwise be lost
            out.insert(0, f"# n {g.n}")
    elif fmt is GraphFormat.COL:
        out = [f"p edge {g.n} {g.m}"] + [f"e {u} {v}" for u, v in edges]
    else:
        out = [f"{g.n} {g.m}"] + [" ".join(map(str, sorted(g.adj[i]))) for i in g.nodes]
    return "\n".join(out) + "\n"


def read_graph(path: str | Path, fmt: "GraphFormat | str | None" = None) -> Graph:
    path = Path(path)
    fmt = GraphFormat.guess(path) if fmt is None else GraphFormat.parse(fmt)
    return parse_graph(path.read_bytes(), fmt)


def save_graph(g: Graph, path: str | Path, fmt: "GraphFormat | str | None" = None) -> None:
    path = Path(path)
    fmt = GraphFormat.guess(path) if fmt is None else GraphFormat.parse(fmt)
    path.write_text(write_graph(g, fmt))
