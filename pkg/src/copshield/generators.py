"""Seeded graph families used by the CLI and the test corpus."""

from __future__ import annotations

import random

from .errors import CopShieldError
from .graph import Graph

FAMILIES = (
    "gnp-connected",
    "cycle",
    "path",
    "grid",
    "star-forest-plus-cover",
    "petersen",
    "complete-bipartite",
)


class GenerationError(CopShieldError):
    pass


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)], name=f"P{n}")


def cycle(n: int) -> Graph:
    if n < 3:
        raise GenerationError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)], name=f"C{n}")


def complete(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)], name=f"K{n}")


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)], name=f"K1,{leaves}")


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)], name=f"K{a},{b}")


def grid(rows: int, cols: int) -> Graph:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges, name=f"grid{rows}x{cols}")


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner, name="petersen")


def random_tree(n: int, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph(n, [(rng.randrange(i), i) for i in range(1, n)], name=f"tree{n}-s{seed}")


def gnp_connected(n: int, p: float, seed: int, max_tries: int = 2000) -> Graph:
    """G(n, p) conditioned on connectivity by rejection; same seed, same graph."""
    if not 0.0 <= p <= 1.0:
        raise GenerationError(f"edge probability {p} outside [0, 1]")
    rng = random.Random(seed)
    for _ in range(max_tries):
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        g = Graph(n, edges, name=f"gnp{n}-p{p}-s{seed}")
        if g.is_connected():
            return g
    raise GenerationError(f"no connected G({n}, {p}) within {max_tries} tries")


def star_forest_plus_cover(n: int, cover_size: int, seed: int, core: str = "clique") -> Graph:
    """Graph whose first ``cover_size`` vertices form a vertex cover.

    The remaining vertices are independent and each attaches to one to three
    core vertices, so ``vc(G) <= cover_size`` by construction.
    """
    if not 1 <= cover_size <= n:
        raise GenerationError("cover size must lie in [1, n]")
    rng = random.Random(seed)
    for _ in range(1000):
        edges = []
        if core == "clique":
            edges += [(i, j) for i in range(cover_size) for j in range(i + 1, cover_size)]
        elif core != "independent":
            raise GenerationError(f"unknown core kind {core!r}")
        for v in range(cover_size, n):
            k = rng.randint(1, min(3, cover_size))
            edges += [(u, v) for u in rng.sample(range(cover_size), k)]
        g = Graph(n, edges, name=f"sfc{n}-c{cover_size}-s{seed}")
        if g.is_connected():
            return g
    raise GenerationError("could not connect the star forest")


def generate(family: str, n: int = 0, p: float = 0.3, seed: int | None = None, **extra) -> Graph:
    """Dispatch on a family name as accepted by the CLI."""
    if family == "gnp-connected":
        if seed is None:
            raise GenerationError("gnp-connected needs a seed")
        return gnp_connected(n, p, seed)
    if family == "cycle":
        return cycle(n)
    if family == "path":
        return path(n)
    if family == "grid":
        return grid(n, extra.get("cols") or n)
    if family == "star-forest-plus-cover":
        if seed is None:
            raise GenerationError("star-forest-plus-cover needs a seed")
        return star_forest_plus_cover(n, extra.get("cover_size") or max(1, n // 4), seed,
                                      extra.get("core", "clique"))
    if family == "petersen":
        return petersen()
    if family == "complete-bipartite":
        return complete_bipartite(n, extra.get("cols") or n)
    raise GenerationError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
