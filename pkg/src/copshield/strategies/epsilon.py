"""Capture with at most ``eps·vc(G) + c`` cops, ``c = (3/eps)^(2/eps) + 1``.

Cases, tried in order on each (sub)graph: a long geodesic (diameter at
least ``2/eps``), a 1-ball meeting a minimum vertex cover ``X`` at least
``1/eps`` times, a 2-ball holding ``4/eps^2`` cover vertices (patrols with
``K = floor(1/eps)``), and otherwise one cop per cover vertex.  Every
reduction protects its set and recurses on each remaining component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..bounds import epsilon_c
from ..errors import DomainError
from ..graph import Graph, ball, longest_geodesic, min_vertex_cover
from .base import Protector, StationaryCops, capture_certificate
from .compose import compose_protection
from .guard import geodesic_protector, one_ball_protector
from .patrol import patrol_protector
from .plan import PlanNode

REDUCTION_KINDS = ("geodesic-guard", "one-ball", "patrol")


@dataclass
class EpsilonResult:
    protector: Protector
    epsilon: Fraction
    c: int
    vc: int

    @property
    def plan(self) -> PlanNode:
        return self.protector.plan

    @property
    def strategy(self):
        return self.protector.strategy

    @property
    def budget(self) -> int:
        return self.protector.budget

    @property
    def bound(self) -> Fraction:
        return self.epsilon * self.vc + self.c

    @property
    def within_bound(self) -> bool:
        return self.budget <= self.bound


def epsilon_strategy(g: Graph, epsilon) -> EpsilonResult:
    eps = Fraction(epsilon)
    if not 0 < eps <= 1:
        raise DomainError(f"epsilon must lie in (0, 1], got {eps}")
    g.require_connected()
    c, _ = epsilon_c(eps)
    vc = len(min_vertex_cover(g))
    prot = _capture(g, eps, tuple(g.vertices()))
    res = EpsilonResult(prot, eps, c, vc)
    prot.plan.params["bound"] = str(res.bound)
    if not res.within_bound:
        raise AssertionError(f"budget {res.budget} exceeds eps*vc + c = {res.bound}")
    return res


def _capture(g: Graph, eps: Fraction, to_root) -> Protector:
    x = min_vertex_cover(g)
    vc = len(x)
    if g.n == 1 or vc == 0:
        return _base(g, (0,), to_root, vc)

    def recurse(sub: Graph, sub_root):
        return _capture(sub, eps, sub_root)

    if g.diameter() * eps >= 2:
        path = longest_geodesic(g)
        outer = geodesic_protector(g, path, to_root)
        outer.plan.params.update(case="diameter", x_hits=len(x.intersection(path.vertices)), vc=vc)
        if len(path.vertices) == g.n:
            return outer  # protecting all of V(g) is capture
        return compose_protection(g, outer, recurse, to_root)
    w, hits = _heaviest(g, x, 1)
    if hits * eps >= 1:
        outer = one_ball_protector(g, w, to_root)
        outer.plan.params.update(case="one-ball", x_hits=hits, vc=vc)
        if len(ball(g, w, 1)) == g.n:
            return outer  # protecting all of V(g) is capture
        return compose_protection(g, outer, recurse, to_root)
    v, hits = _heaviest(g, x, 2)
    if hits * eps * eps >= 4:
        outer = patrol_protector(g, x, v, 2, math.floor(1 / eps), to_root)
        outer.plan.params.update(case="two-ball", x_hits=hits, vc=vc)
        return compose_protection(g, outer, recurse, to_root)
    return _base(g, tuple(sorted(x)), to_root, vc)


def _heaviest(g: Graph, x, radius: int) -> tuple[int, int]:
    best = max(g.vertices(), key=lambda v: (len(ball(g, v, radius) & x), -v))
    return best, len(ball(g, best, radius) & x)


def _base(g: Graph, posts, to_root, vc: int) -> Protector:
    """Cops on a vertex cover: a robber off the cover is next to a cop."""
    strat = StationaryCops(g, posts)
    cert = capture_certificate(g, strat)
    plan = PlanNode("base-case", strat.n_cops, cert.threshold_step,
                    removed=frozenset(to_root[v] for v in posts),
                    protected=frozenset(to_root[v] for v in g.vertices()),
                    params={"posts": tuple(to_root[v] for v in posts), "vc": vc})
    return Protector(strat, cert, plan)
