"""Line-oriented text format for graphs with capacities.

    # comment
    g <n> <m> <W>
    b <v> <b_v>          (optional; capacity defaults to 1)
    e <u> <v> <w>        (m lines, in stream order)

The ``e`` lines define edge ids 0..m-1 in file order, which is also the
order used when a stream is replayed "as-is".
"""

from __future__ import annotations

import io
from typing import TextIO

from .graph import Capacities, MultiGraph, Subgraph

__all__ = ["GraphFormatError", "read_graph", "write_graph", "parse_graph", "format_graph"]


class GraphFormatError(ValueError):
    """Malformed graph file; carries the offending 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def parse_graph(text: str) -> tuple[MultiGraph, Capacities]:
    return read_graph(io.StringIO(text))


def read_graph(source: TextIO | str) -> tuple[MultiGraph, Capacities]:
    """Parse a graph file from a path or open text stream."""
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return read_graph(fh)

    header: tuple[int, int, int] | None = None
    caps: dict[int, int] = {}
    triples: list[tuple[int, int, int]] = []
    for line_no, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        try:
            values = [int(a) for a in args]
        except ValueError:
            raise GraphFormatError(line_no, f"non-integer field in {line!r}")
        if kind == "g":
            if header is not None:
                raise GraphFormatError(line_no, "duplicate header")
            if len(values) != 3:
                raise GraphFormatError(line_no, "header needs exactly: g <n> <m> <W>")
            header = (values[0], values[1], values[2])
        elif kind == "b":
            if header is None:
                raise GraphFormatError(line_no, "capacity line before header")
            if len(values) != 2:
                raise GraphFormatError(line_no, "capacity line needs: b <v> <b_v>")
            v, bv = values
            if not (0 <= v < header[0]):
                raise GraphFormatError(line_no, f"vertex {v} out of range")
            if bv < 1:
                raise GraphFormatError(line_no, "capacity must be >= 1")
            caps[v] = bv
        elif kind == "e":
            if header is None:
                raise GraphFormatError(line_no, "edge line before header")
            if len(values) != 3:
                raise GraphFormatError(line_no, "edge line needs: e <u> <v> <w>")
            triples.append((values[0], values[1], values[2]))
        else:
            raise GraphFormatError(line_no, f"unknown record type {kind!r}")

    if header is None:
        raise GraphFormatError(1, "missing header line 'g <n> <m> <W>'")
    n, m, W = header
    if len(triples) != m:
        raise GraphFormatError(1, f"header declares m={m} but file has {len(triples)} edge lines")
    try:
        graph = MultiGraph(n, triples, W=W)
    except ValueError as exc:
        raise GraphFormatError(1, str(exc)) from exc
    b = Capacities([caps.get(v, 1) for v in range(n)])
    return graph, b


def format_graph(G: MultiGraph, b: Capacities | None = None) -> str:
    """Render a graph (and non-default capacities) in the file format."""
    out = [f"g {G.n} {G.m} {G.W}"]
    if b is not None:
        for v in range(G.n):
            if b[v] != 1:
                out.append(f"b {v} {b[v]}")
    for e in G.edges:
        out.append(f"e {e.u} {e.v} {e.w}")
    return "\n".join(out) + "\n"


def write_graph(path: str, G: MultiGraph, b: Capacities | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(G, b))


def write_subgraph(path: str, H: Subgraph, b: Capacities | None = None) -> None:
    """Write a subgraph as a standalone graph file (same n and W)."""
    G = H.parent
    restricted, _ = G.restrict(H.members)
    write_graph(path, restricted, b)


def match_subgraph_edges(G: MultiGraph, S: MultiGraph) -> list[int]:
    """Map each edge of ``S`` onto a distinct edge of ``G`` with the same
    endpoints and weight, preferring smaller ids.

    Raises ValueError when ``S`` is not a sub-multiset of ``G``'s edges;
    used to re-anchor a subgraph file onto its parent graph.
    """
    if S.n != G.n:
        raise ValueError(f"vertex count mismatch: parent has {G.n}, subgraph file has {S.n}")
    pool: dict[tuple[int, int, int], list[int]] = {}
    for e in G.edges:
        pool.setdefault((*e.pair(), e.w), []).append(e.id)
    for ids in pool.values():
        ids.reverse()  # pop() then yields smallest id first
    matched: list[int] = []
    for e in S.edges:
        key = (*e.pair(), e.w)
        ids = pool.get(key)
        if not ids:
            raise ValueError(
                f"subgraph edge ({e.u}, {e.v}, w={e.w}) has no unused counterpart in the parent graph"
            )
        matched.append(ids.pop())
    return matched
