"""Protect-then-recurse composition.

Outer cops protect ``U``.  Once their threshold has passed, a robber that is
still free stays inside one component ``C`` of ``G - U`` (entering ``U``
would get it caught), so the inner cops walk from a waiting hub to the
start vertices of the strategy chosen for ``C`` and run it inside ``C``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import PreconditionError
from ..game import CopStrategy, Observation, ProtectionCertificate
from ..graph import Graph, center_vertex, components_after_removal, geodesic_between
from .base import Protector
from .plan import PlanNode


@dataclass
class InnerGame:
    """Strategy for one component, expressed on the induced subgraph."""

    vertices: tuple[int, ...]  # subgraph id -> id in the outer graph
    protector: Protector | None

    @property
    def budget(self) -> int:
        return 0 if self.protector is None else self.protector.budget


class ComposedStrategy(CopStrategy):
    """Outer strategy on cops ``0..k-1``; inner cops ``k..k+p-1``.

    State: ``(outer_state, "wait", step)`` until the outer threshold has
    passed and the robber is outside ``U``, then
    ``(outer_state, "walk", component, elapsed)`` while the inner cops walk in,
    then ``(outer_state, "inner", component, inner_state)``.
    """

    def __init__(self, graph: Graph, outer: Protector, removed, inner: list[InnerGame],
                 hub: int | None = None) -> None:
        self.outer = outer
        self.removed = frozenset(removed)
        self.inner = inner
        self.p = max((game.budget for game in inner), default=0)
        super().__init__(graph, outer.budget + self.p)
        self.hub = center_vertex(graph) if hub is None else graph._check(hub)
        self.t_out = max(outer.certificate.threshold_step, 1)
        self._comp_of = {}
        for ci, game in enumerate(inner):
            for local, v in enumerate(game.vertices):
                self._comp_of[v] = (ci, local)
        # walking routes: inner cop j -> start vertex of component strategy
        self._routes: list[tuple[tuple[int, ...], ...]] = []
        for game in inner:
            starts = () if game.protector is None else game.protector.strategy.initial_placements()
            routes = []
            for j in range(self.p):
                dest = game.vertices[starts[j]] if j < len(starts) else self.hub
                routes.append(geodesic_between(graph, self.hub, dest).vertices)
            self._routes.append(tuple(routes))
        self.walk_max = max((len(r) - 1 for rs in self._routes for r in rs), default=0)
        in_c = [g.protector.certificate.threshold_step for g in inner if g.protector is not None]
        self.inner_threshold = max([max(c, 1) for c in in_c], default=1)

    def initial_placements(self):
        return tuple(self.outer.strategy.initial_placements()) + (self.hub,) * self.p

    def initial_state(self):
        return (self.outer.strategy.initial_state(), "wait", 1)

    def transition(self, state, obs: Observation):
        k = self.outer.budget
        outer_pos, outer_state = self.outer.strategy.transition(state[0], Observation(obs.cops[:k], obs.robber))
        inner_pos = tuple(obs.cops[k:])
        mode = state[1]
        if mode == "wait":
            step = state[2]
            if step < self.t_out or obs.robber in self.removed:
                return tuple(outer_pos) + inner_pos, (outer_state, "wait", min(step + 1, self.t_out))
            comp = self._comp_of[obs.robber][0]
            mode, state = "walk", (None, "walk", comp, 0)
        comp = state[2]
        if mode == "walk":
            elapsed = state[3]
            if elapsed < self._walk_len(comp):
                elapsed += 1
                routes = self._routes[comp]
                moved = tuple(r[min(elapsed, len(r) - 1)] for r in routes)
                return tuple(outer_pos) + moved, (outer_state, "walk", comp, elapsed)
            game = self.inner[comp]
            inner_state = None if game.protector is None else game.protector.strategy.initial_state()
            state = (None, "inner", comp, inner_state)
        moved, new_state = self._inner_move(comp, state[3], inner_pos, obs.robber, outer_state)
        return tuple(outer_pos) + moved, new_state

    def _inner_move(self, comp, inner_state, inner_pos, robber, outer_state):
        game = self.inner[comp]
        if game.protector is None:
            return inner_pos, (outer_state, "inner", comp, inner_state)
        where = self._comp_of.get(robber)
        if where is None or where[0] != comp:
            # robber sits in U: the outer cops will take it, inner cops hold
            return inner_pos, (outer_state, "inner", comp, inner_state)
        strat = game.protector.strategy
        mine = inner_pos[:strat.n_cops]
        local = tuple(self._local(comp, v) for v in mine)
        new_local, new_state = strat.transition(inner_state, Observation(local, where[1]))
        moved = tuple(game.vertices[v] for v in new_local) + inner_pos[strat.n_cops:]
        return moved, (outer_state, "inner", comp, new_state)

    def _local(self, comp: int, v: int) -> int:
        where = self._comp_of.get(v)
        if where is None or where[0] != comp:
            raise PreconditionError(f"inner cop off its component at {v}")
        return where[1]

    def _walk_len(self, comp: int) -> int:
        return max((len(r) - 1 for r in self._routes[comp]), default=0)

    def threshold(self) -> int:
        return self.t_out + self.walk_max + self.inner_threshold - 1

    def protected(self) -> frozenset[int]:
        out = set(self.removed)
        for game in self.inner:
            if game.protector is not None:
                out.update(game.vertices[v] for v in game.protector.certificate.protected_set)
        return frozenset(out)

    def certificate(self) -> ProtectionCertificate:
        return ProtectionCertificate(self.protected(), self.n_cops, self.threshold())


def compose_protection(g: Graph, outer: Protector, inner_factory, to_root=None, hub: int | None = None) -> Protector:
    """Combine ``outer`` (protecting its certificate's set ``U``) with
    ``inner_factory(subgraph, to_parent) -> Protector | None`` applied to every
    component of ``g - U``."""
    to_root = tuple(g.vertices()) if to_root is None else tuple(to_root)
    removed = outer.certificate.protected_set
    comps = components_after_removal(g, removed)
    inner = []
    children = []
    for comp in comps:
        sub, to_parent = g.induced_subgraph(comp)
        sub_root = tuple(to_root[v] for v in to_parent)
        prot = inner_factory(sub, sub_root)
        inner.append(InnerGame(to_parent, prot))
        if prot is not None:
            children.append(PlanNode("component-branch", prot.budget, prot.certificate.threshold_step,
                                     component=frozenset(sub_root), children=[prot.plan]))
    if all(game.protector is None for game in inner):
        return outer
    strat = ComposedStrategy(g, outer, removed, inner, hub)
    cert = strat.certificate()
    node = outer.plan
    node.children.extend(children)
    node.budget = strat.n_cops
    node.params["own_budget"] = outer.budget
    node.params["own_threshold"] = outer.certificate.threshold_step
    node.threshold = cert.threshold_step
    return Protector(strat, cert, node)
