#!/usr/bin/env python3
"""Enumerate connected graphs up to isomorphism and write them as graph6.

Graphs on n vertices are grown from connected graphs on n-1 vertices by
adding a vertex v that is a minimum-degree non-cut vertex of the result
(every connected graph has such a vertex), then deduplicated through a
canonical form computed by individualisation/refinement with twin pruning.

Usage: enumerate_connected.py MAX_N OUT.g6.gz
"""

from __future__ import annotations

import gzip
import sys
import time

import networkx as nx

# connected graphs on n unlabeled vertices (OEIS A001349)
EXPECTED = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117, 9: 261080, 10: 11716571}


def _refine(adj, cells):
    """Split cells by neighbour counts into every cell until stable.

    Pieces are ordered by their count signature, so the result depends only
    on the graph structure and the incoming cell order.
    """
    cells = [list(c) for c in cells]
    while True:
        masks = [sum(1 << v for v in c) for c in cells]
        out = []
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups = {}
            for v in cell:
                groups.setdefault(tuple((adj[v] & m).bit_count() for m in masks), []).append(v)
            for key in sorted(groups):
                out.append(groups[key])
        if len(out) == len(cells):
            return out
        cells = out


def _code(adj, order):
    n = len(order)
    code = 0
    for j in range(1, n):
        aj = adj[order[j]]
        for i in range(j):
            code = (code << 1) | (aj >> order[i] & 1)
    return code


def canonical(adj):
    n = len(adj)
    deg_cells = {}
    for v in range(n):
        deg_cells.setdefault(adj[v].bit_count(), []).append(v)
    start = _refine(adj, [deg_cells[d] for d in sorted(deg_cells)])
    best = [None]

    def search(cells):
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            code = _code(adj, [c[0] for c in cells])
            if best[0] is None or code < best[0]:
                best[0] = code
            return
        tried = []
        for u in cells[target]:
            if any((adj[u] & ~(1 << t)) == (adj[t] & ~(1 << u)) for t in tried):
                continue
            tried.append(u)
            rest = [v for v in cells[target] if v != u]
            nxt = cells[:target] + [[u], rest] + cells[target + 1:]
            search(_refine(adj, nxt))

    search(start)
    return best[0]


def _is_cut(adj, n, v):
    alive = ((1 << n) - 1) & ~(1 << v)
    if not alive:
        return False
    start = (alive & -alive).bit_length() - 1
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            f ^= low
            nxt |= adj[low.bit_length() - 1]
        nxt &= alive & ~seen
        seen |= nxt
        frontier = nxt
    return seen != alive


def _decode(code, n):
    adj = [0] * n
    bit = n * (n - 1) // 2 - 1
    for j in range(1, n):
        for i in range(j):
            if code >> bit & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            bit -= 1
    return adj


def grow(parents, n):
    """Children on n vertices of the connected graphs in ``parents`` (n-1 vertices)."""
    seen = set()
    for pcode in parents:
        base = _decode(pcode, n - 1)
        for s in range(1, 1 << (n - 1)):
            deg_new = s.bit_count()
            adj = base + [s]
            adj = [a | ((s >> i & 1) << (n - 1)) if i < n - 1 else a for i, a in enumerate(adj)]
            ok = True
            for u in range(n - 1):
                if adj[u].bit_count() < deg_new and not _is_cut(adj, n, u):
                    ok = False
                    break
            if not ok:
                continue
            seen.add(canonical(adj))
    return seen


def to_graph6(code, n):
    adj = _decode(code, n)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((i, j) for i in range(n) for j in range(i + 1, n) if adj[i] >> j & 1)
    return nx.to_graph6_bytes(g, header=False).strip()


def main(argv):
    max_n, out = int(argv[1]), argv[2]
    level = {canonical([0])}
    with gzip.open(out, "wb") as fh:
        for n in range(1, max_n + 1):
            t0 = time.time()
            if n > 1:
                level = grow(level, n)
            print(f"n={n}: {len(level)} graphs ({time.time() - t0:.1f}s)", file=sys.stderr)
            if len(level) != EXPECTED[n]:
                raise SystemExit(f"count mismatch at n={n}: expected {EXPECTED[n]}")
            for code in sorted(level):
                fh.write(to_graph6(code, n) + b"\n")


if __name__ == "__main__":
    main(sys.argv)
