"""Edge-list and DIMACS graph files.

The native format is a header line ``n m`` followed by ``m`` lines ``u v``
with 0-based ids.  DIMACS ``p edge`` files (1-based, ``e u v`` lines) are
accepted on input only.
"""

from __future__ import annotations

import os
from pathlib import Path

from .graph import Graph


class GraphFormatError(ValueError):
    pass


def parse_graph(text: str, name: str | None = None) -> Graph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphFormatError("empty graph file")
    if any(ln.startswith("p ") for ln in lines):
        return _parse_dimacs(lines, name)
    return _parse_edge_list(lines, name)


def _parse_edge_list(lines: list[str], name: str | None) -> Graph:
    try:
        n, m = (int(tok) for tok in lines[0].split())
        edges = [tuple(int(tok) for tok in ln.split()) for ln in lines[1:]]
    except ValueError as exc:
        raise GraphFormatError(f"bad edge-list line: {exc}") from None
    if len(edges) != m or any(len(e) != 2 for e in edges):
        raise GraphFormatError(f"header promises {m} edges, found {len(edges)}")
    return Graph(n, edges, name=name)


def _parse_dimacs(lines: list[str], name: str | None) -> Graph:
    n = None
    edges = []
    for ln in lines:
        tag, *rest = ln.split()
        if tag == "c":
            continue
        if tag == "p":
            if len(rest) < 2 or rest[0] not in ("edge", "col"):
                raise GraphFormatError(f"unsupported DIMACS problem line: {ln!r}")
            n = int(rest[1])
        elif tag == "e":
            u, v = int(rest[0]) - 1, int(rest[1]) - 1
            if u != v:
                edges.append((u, v))
        else:
            raise GraphFormatError(f"unknown DIMACS line: {ln!r}")
    if n is None:
        raise GraphFormatError("DIMACS file without 'p edge' line")
    return Graph(n, edges, name=name)


def format_edge_list(g: Graph) -> str:
    edges = g.edges()
    body = "".join(f"{u} {v}\n" for u, v in edges)
    return f"{g.n} {len(edges)}\n{body}"


def read_graph(path: str | os.PathLike) -> Graph:
    p = Path(path)
    return parse_graph(p.read_text(), name=p.stem)


def write_graph(g: Graph, path: str | os.PathLike) -> None:
    Path(path).write_text(format_edge_list(g))


def parse_graph6(line: str | bytes, name: str | None = None) -> Graph:
    """Decode one graph6 record (graphs with at most 62 vertices)."""
    data = line.strip()
    if isinstance(data, str):
        data = data.encode("ascii")
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    if not data or data[0] == 126:
        raise GraphFormatError("graph6 records above 62 vertices are not supported")
    vals = [c - 63 for c in data]
    if any(not 0 <= v < 64 for v in vals):
        raise GraphFormatError("graph6 byte out of range")
    n = vals[0]
    need = n * (n - 1) // 2
    if (len(vals) - 1) * 6 < need:
        raise GraphFormatError("graph6 record too short")
    edges = []
    bit = 0
    for j in range(1, n):
        for i in range(j):
            if vals[1 + bit // 6] >> (5 - bit % 6) & 1:
                edges.append((i, j))
            bit += 1
    return Graph(n, edges, name=name)


def format_graph6(g: Graph) -> str:
    n = g.n
    if n > 62:
        raise GraphFormatError("graph6 writer supports at most 62 vertices")
    bits = [1 if g.has_edge(i, j) else 0 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    chars = [n + 63]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        chars.append(val + 63)
    return bytes(chars).decode("ascii")
