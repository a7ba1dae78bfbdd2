"""Immutable undirected graphs and the metric primitives the strategies use.

Vertices are the integers ``0..n-1``.  Vertex sets are plain ``frozenset``
objects; every function that takes one validates the ids it touches.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DisconnectedError, InvalidVertexError, PreconditionError, SizeLimitError

VertexSet = frozenset

#: Internal marker for "unreachable" in cached distance rows.
_UNREACHED = -1

DEFAULT_VC_LIMIT = 40


class Graph:
    """Simple undirected graph with sorted adjacency lists.

    Instances never change after construction, so BFS rows are cached and a
    graph can be shared freely between games and threads.
    """

    __slots__ = ("_adj", "_name", "_rows", "_masks", "_edge_count")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), name: str | None = None) -> None:
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidVertexError(f"edge ({u}, {v}) outside [0, {n})")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self._adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in nbrs)
        self._name = name
        self._rows: dict[int, tuple[int, ...]] = {}
        self._masks: tuple[int, ...] | None = None
        self._edge_count = sum(len(a) for a in self._adj) // 2

    # construction helpers -------------------------------------------------
    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Iterable[int]], name: str | None = None) -> "Graph":
        edges = [(u, v) for u, nb in enumerate(adjacency) for v in nb if u < v]
        g = cls(len(adjacency), edges, name=name)
        for u, nb in enumerate(adjacency):
            if set(nb) != set(g._adj[u]):
                raise ValueError(f"adjacency of {u} is not symmetric")
        return g

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Return ``(sub, to_parent)`` where ``to_parent[i]`` is the id in ``self``."""
        keep = tuple(sorted(set(vertices)))
        for v in keep:
            self._check(v)
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[w]) for u in keep for w in self._adj[u] if u < w and w in index]
        return Graph(len(keep), edges), keep

    # basic queries --------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self._adj)

    vertex_count = n

    @property
    def m(self) -> int:
        return self._edge_count

    @property
    def name(self) -> str | None:
        return self._name

    def vertices(self) -> range:
        return range(len(self._adj))

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check(v)
        return self._adj[v]

    adjacency = neighbors

    def closed_neighborhood(self, v: int) -> tuple[int, ...]:
        """``v`` and its neighbours in ascending order: the legal one-step moves."""
        self._check(v)
        return tuple(sorted(self._adj[v] + (v,)))

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        return v in self._adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nb in enumerate(self._adj) for v in nb if u < v]

    def masks(self) -> tuple[int, ...]:
        """Neighbourhood bitmasks, used by the exponential routines."""
        if self._masks is None:
            self._masks = tuple(sum(1 << w for w in nb) for nb in self._adj)
        return self._masks

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return all(d != _UNREACHED for d in self.distance_row(0))

    def require_connected(self) -> None:
        if not self.is_connected():
            raise DisconnectedError("graph is not connected")

    # distances ------------------------------------------------------------
    def distance_row(self, source: int) -> tuple[int, ...]:
        """Hop distances from ``source``; ``-1`` marks unreachable vertices."""
        row = self._rows.get(source)
        if row is None:
            self._check(source)
            dist = [_UNREACHED] * self.n
            dist[source] = 0
            queue = deque([source])
            while queue:
                u = queue.popleft()
                du = dist[u] + 1
                for w in self._adj[u]:
                    if dist[w] == _UNREACHED:
                        dist[w] = du
                        queue.append(w)
            row = tuple(dist)
            self._rows[source] = row
        return row

    def dist(self, u: int, v: int) -> float:
        d = self.distance_row(u)[self._check(v)]
        return math.inf if d == _UNREACHED else d

    def diameter(self) -> int:
        self.require_connected()
        if self.n == 0:
            raise PreconditionError("empty graph has no diameter")
        return max(max(self.distance_row(v)) for v in self.vertices())

    def _check(self, v: int) -> int:
        if not isinstance(v, int) or not 0 <= v < len(self._adj):
            raise InvalidVertexError(f"vertex {v!r} not in graph on {len(self._adj)} vertices")
        return v

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self._adj)

    def __repr__(self) -> str:
        label = f" {self._name!r}" if self._name else ""
        return f"<Graph{label} n={self.n} m={self.m}>"


@dataclass(frozen=True)
class Geodesic:
    """A shortest path ``p_0 .. p_L``."""

    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def index_of(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def certify(self, g: Graph) -> "Geodesic":
        """Raise ``PreconditionError`` unless this is a shortest path in ``g``."""
        if not self.vertices:
            raise PreconditionError("geodesic has no vertices")
        row = g.distance_row(self.vertices[0])
        for j, v in enumerate(self.vertices):
            if row[v] != j:
                raise PreconditionError(f"not a geodesic: dist({self.vertices[0]}, {v}) != {j}")
        return self


# ---------------------------------------------------------------------------
# metric operations

def bfs_distances(g: Graph, source: int) -> dict[int, float]:
    row = g.distance_row(source)
    return {v: (math.inf if d == _UNREACHED else d) for v, d in enumerate(row)}


def ball(g: Graph, center: int, radius: int) -> frozenset[int]:
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    row = g.distance_row(center)
    return frozenset(v for v, d in enumerate(row) if 0 <= d <= radius)


def ball_of_set(g: Graph, a: Iterable[int], radius: int) -> frozenset[int]:
    out: set[int] = set()
    for v in a:
        out |= ball(g, v, radius)
    return frozenset(out)


def ball_mask(g: Graph, center: int, radius: int) -> int:
    row = g.distance_row(center)
    return sum(1 << v for v, d in enumerate(row) if 0 <= d <= radius)


def geodesic_between(g: Graph, u: int, v: int) -> Geodesic:
    """Canonical shortest path: BFS from ``u`` with neighbours scanned in ascending id."""
    g._check(u)
    g._check(v)
    if u == v:
        return Geodesic((u,))
    parent = {u: u}
    queue = deque([u])
    while queue and v not in parent:
        a = queue.popleft()
        for w in g.neighbors(a):
            if w not in parent:
                parent[w] = a
                queue.append(w)
    if v not in parent:
        raise DisconnectedError(f"{u} and {v} lie in different components")
    path = [v]
    while path[-1] != u:
        path.append(parent[path[-1]])
    return Geodesic(tuple(reversed(path))).certify(g)


def longest_geodesic(g: Graph) -> Geodesic:
    """A diameter-realising geodesic; the lexicographically first extremal pair wins."""
    if g.n == 0:
        raise PreconditionError("empty graph")
    g.require_connected()
    best = (0, 0, 0)
    for u in g.vertices():
        row = g.distance_row(u)
        for v in range(u + 1, g.n):
            if row[v] > best[0]:
                best = (row[v], u, v)
    return geodesic_between(g, best[1], best[2])


def set_diameter(g: Graph, s: Iterable[int]) -> int:
    members = sorted(set(s))
    if not members:
        raise PreconditionError("diameter of an empty set is undefined")
    worst = 0
    for i, u in enumerate(members):
        row = g.distance_row(u)
        for v in members[i + 1:]:
            if row[v] == _UNREACHED:
                raise DisconnectedError(f"{u} and {v} lie in different components")
            worst = max(worst, row[v])
    return worst


def components_after_removal(g: Graph, removed: Iterable[int]) -> list[frozenset[int]]:
    """Components of ``g - removed``, ordered by their minimum vertex."""
    gone = set(removed)
    for v in gone:
        g._check(v)
    seen = set(gone)
    comps = []
    for s in g.vertices():
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            a = queue.popleft()
            for w in g.neighbors(a):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    return comps


def open_neighborhood_of_set(g: Graph, c: Iterable[int]) -> frozenset[int]:
    inside = set(c)
    out = set()
    for v in inside:
        out.update(g.neighbors(v))
    return frozenset(out - inside)


def is_vertex_cover(g: Graph, cover: Iterable[int]) -> bool:
    chosen = set(cover)
    return all(u in chosen or v in chosen for u, v in g.edges())


def min_vertex_cover(g: Graph, limit: int = DEFAULT_VC_LIMIT) -> frozenset[int]:
    """Exact minimum vertex cover by branch and bound.

    Branches on a maximum-degree vertex ``v``: either ``v`` is in the cover,
    or all of ``N(v)`` is.  A greedy maximal matching gives the lower bound.
    """
    if g.n > limit:
        raise SizeLimitError(f"vertex cover solver capped at {limit} vertices (got {g.n})")
    masks = g.masks()

    def matching_bound(alive: int) -> int:
        free = alive
        size = 0
        while free:
            v = (free & -free).bit_length() - 1
            free &= ~(1 << v)
            nb = masks[v] & free
            if nb:
                w = (nb & -nb).bit_length() - 1
                free &= ~(1 << w)
                size += 1
        return size

    # Greedy upper bound: take a max-degree vertex until no edge remains.
    best_mask = 0
    alive = (1 << g.n) - 1
    while True:
        degs = [(masks[u] & alive).bit_count() if alive >> u & 1 else 0 for u in range(g.n)]
        v = max(range(g.n), key=degs.__getitem__, default=None)
        if v is None or degs[v] == 0:
            break
        best_mask |= 1 << v
        alive &= ~(1 << v)
    best = [best_mask.bit_count(), best_mask]

    def search(alive: int, taken: int, count: int) -> None:
        if count + matching_bound(alive) >= best[0]:
            return
        top, top_deg = -1, 0
        a = alive
        while a:
            v = (a & -a).bit_length() - 1
            a &= a - 1
            deg = (masks[v] & alive).bit_count()
            if deg > top_deg:
                top, top_deg = v, deg
        if top_deg == 0:
            best[0], best[1] = count, taken
            return
        if top_deg == 1:
            # every component is an edge: one endpoint each
            extra = matching_bound(alive)
            cover = taken
            a = alive
            while a:
                v = (a & -a).bit_length() - 1
                a &= a - 1
                nb = masks[v] & alive
                if nb and not cover & nb and not cover >> v & 1:
                    cover |= 1 << v
            best[0], best[1] = count + extra, cover
            return
        search(alive & ~(1 << top), taken | (1 << top), count + 1)
        nb = masks[top] & alive
        search(alive & ~nb & ~(1 << top), taken | nb, count + nb.bit_count())

    search((1 << g.n) - 1, 0, 0)
    cover = frozenset(v for v in g.vertices() if best[1] >> v & 1)
    if not is_vertex_cover(g, cover) or len(cover) != best[0]:
        raise AssertionError("vertex cover certificate failed")
    return cover


def vertex_cover_number(g: Graph, limit: int = DEFAULT_VC_LIMIT) -> int:
    return len(min_vertex_cover(g, limit))


def center_vertex(g: Graph, candidates: Iterable[int] | None = None) -> int:
    """Vertex of minimum eccentricity (ties to the lowest id)."""
    pool = list(g.vertices()) if candidates is None else sorted(set(candidates))
    return min(pool, key=lambda v: (max(g.distance_row(v)), v))
