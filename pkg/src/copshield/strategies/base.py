"""Shared pieces: the strategy bundle, stationary cops, and movement helpers."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import PreconditionError
from ..game import CopStrategy, Observation, ProtectionCertificate
from ..graph import Graph
from .plan import PlanNode


@dataclass
class Protector:
    """A strategy together with its certificate and the plan that built it."""

    strategy: CopStrategy
    certificate: ProtectionCertificate
    plan: PlanNode

    @property
    def budget(self) -> int:
        return self.strategy.n_cops


def step_toward(g: Graph, a: int, b: int) -> int:
    """Next vertex on the canonical shortest route from ``a`` to ``b``
    (lowest-id neighbour that is one closer)."""
    if a == b:
        return a
    row = g.distance_row(b)
    target = row[a] - 1
    for w in g.neighbors(a):
        if row[w] == target:
            return w
    raise PreconditionError(f"{b} unreachable from {a}")


def pounce(g: Graph, positions: tuple[int, ...], robber: int) -> tuple[int, ...] | None:
    """Move the first cop that is on or next to the robber onto it."""
    for i, c in enumerate(positions):
        if c == robber or robber in g.neighbors(c):
            return positions[:i] + (robber,) + positions[i + 1:]
    return None


class StationaryCops(CopStrategy):
    """Cops sit on ``posts`` and only leave a post to capture an adjacent robber.

    Used for the base cases (one cop per protected vertex), the one-ball
    guard (a single post) and the final cop of a confined component.
    """

    def __init__(self, graph: Graph, posts) -> None:
        posts = tuple(posts)
        if not posts:
            raise PreconditionError("stationary strategy needs at least one post")
        for v in posts:
            graph._check(v)
        super().__init__(graph, len(posts))
        self.posts = posts

    def initial_placements(self):
        return self.posts

    def transition(self, state, obs: Observation):
        hit = pounce(self.graph, tuple(obs.cops), obs.robber)
        if hit is not None:
            return hit, state
        moved = tuple(c if c == p else step_toward(self.graph, c, p) for c, p in zip(obs.cops, self.posts))
        return moved, state

    def certificate_for(self, protected) -> ProtectionCertificate:
        """Robbers on a post, or next to one, are taken at the first cop move."""
        protected = frozenset(protected)
        reach = set(self.posts)
        for p in self.posts:
            reach.update(self.graph.neighbors(p))
        if not protected <= reach:
            raise PreconditionError("stationary cops only protect their closed neighbourhood")
        return ProtectionCertificate(protected, self.n_cops, 1)


def stationary_protector(g: Graph, posts, protected, kind: str, to_root, **params) -> Protector:
    strat = StationaryCops(g, posts)
    cert = strat.certificate_for(protected)
    plan = PlanNode(kind, strat.n_cops, cert.threshold_step,
                    removed=frozenset(to_root[v] for v in protected),
                    protected=frozenset(to_root[v] for v in protected),
                    params={"posts": tuple(to_root[v] for v in posts), **params})
    return Protector(strat, cert, plan)


def capture_certificate(g: Graph, strategy: CopStrategy) -> ProtectionCertificate:
    """Certificate for a strategy that catches every robber: all of ``V(g)``
    is protected from the first cop move on."""
    return ProtectionCertificate(frozenset(g.vertices()), strategy.n_cops, 1)
