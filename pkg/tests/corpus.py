"""Shared test graphs."""

from __future__ import annotations

import gzip
import random
from functools import lru_cache
from pathlib import Path

from copshield import generators as G
from copshield.graph import Graph
from copshield.io import parse_graph6

DATA = Path(__file__).parent / "data"
CONNECTED_FILE = DATA / "connected_upto9.g6.gz"
# connected graphs on n unlabeled vertices (OEIS A001349)
CONNECTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117, 9: 261080}


@lru_cache(maxsize=None)
def connected_lines() -> tuple[str, ...]:
    with gzip.open(CONNECTED_FILE, "rt") as fh:
        return tuple(line.strip() for line in fh if line.strip())


def connected_graphs(max_n: int = 9, min_n: int = 1):
    for line in connected_lines():
        n = ord(line[0]) - 63
        if min_n <= n <= max_n:
            yield parse_graph6(line)


def gnp_sample(count: int, n_range: tuple[int, int], seed: int, p_range=(0.2, 0.5)) -> list[Graph]:
    """Seeded connected random graphs with ``n`` and ``p`` drawn per graph."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(*n_range)
        p = round(rng.uniform(*p_range), 3)
        out.append(G.gnp_connected(n, p, seed * 100_000 + i))
    return out


def tree(n: int, seed: int) -> Graph:
    return G.random_tree(n, seed)


def caterpillar(spine: int, legs: int) -> Graph:
    edges = [(i, i + 1) for i in range(spine - 1)]
    nxt = spine
    for i in range(spine):
        for _ in range(legs):
            edges.append((i, nxt))
            nxt += 1
    return Graph(nxt, edges, name=f"cat{spine}x{legs}")


def lollipop(clique: int, tail: int) -> Graph:
    edges = [(u, v) for u in range(clique) for v in range(u + 1, clique)]
    edges += [(clique - 1 + i, clique + i) for i in range(tail)]
    return Graph(clique + tail, edges, name=f"lol{clique}-{tail}")


def named_graphs(max_n: int = 14) -> list[Graph]:
    """Hand-picked families plus trees and cover-structured graphs."""
    out = [G.path(n) for n in (2, 3, 5, 7, 10, 14)]
    out += [G.cycle(n) for n in (4, 5, 6, 8, 9, 12)]
    out += [G.complete(4), G.star(8), G.complete_bipartite(2, 3), G.complete_bipartite(3, 4),
            G.petersen(), G.grid(3, 3), G.grid(3, 4), G.grid(2, 6), G.grid(2, 7)]
    out += [tree(n, s) for n, s in ((8, 1), (11, 2), (13, 3))]
    out += [G.star_forest_plus_cover(n, c, s) for n, c, s in ((9, 2, 1), (12, 3, 2), (14, 4, 3))]
    out += [G.star_forest_plus_cover(12, 3, 4, core="independent")]
    out += [caterpillar(4, 2), lollipop(4, 6)]
    seen, uniq = set(), []
    for g in out:
        key = (g.name, g.n, g.m)
        if g.n <= max_n and key not in seen:
            seen.add(key)
            uniq.append(g)
    return uniq
