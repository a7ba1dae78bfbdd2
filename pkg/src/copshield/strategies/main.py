"""Protecting a set ``X`` with about ``|X|/k + f(k, d)`` cops, and the
vertex-cover capture strategy built on top of it.

The recursion tries, in order: the base case (one cop per ``X`` vertex),
a geodesic or 1-ball meeting ``X`` at least ``k`` times (one guard), the
smallest ``s`` whose ball ``B(v, s)`` holds ``s!·2^(s-1)·k^s`` vertices of
``X`` (patrols), and finally the cover-set dispatch endgame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..bounds import BoundReport, bound_report, log2_f, theorem2_k
from ..errors import PreconditionError
from ..graph import (Graph, ball, components_after_removal, geodesic_between, min_vertex_cover,
                     set_diameter)
from .base import Protector, StationaryCops, capture_certificate, stationary_protector
from .compose import compose_protection
from .cover import (CoverDispatchStrategy, CoverSets, DispatchTable, LevelParams, build_dispatch_table,
                    sample_cover_sets)
from .guard import geodesic_protector, one_ball_protector
from .patrol import patrol_protector
from .plan import PlanNode

GEODESIC_SEARCH_NOTE = "canonical BFS geodesics between all vertex pairs; other geodesics not searched"


@dataclass
class MainOptions:
    """Knobs of :func:`main_strategy`.

    ``alpha``, ``base_threshold`` and ``cover_probability`` replace the
    closed-form values, which at desk scale route every instance to the
    base case.  ``force_endgame`` skips the three reductions at the top
    level so the dispatch endgame can be studied on small graphs.
    """

    alpha: float | None = None
    base_threshold: int | None = None
    seed: int = 0
    force_endgame: bool = False
    cover_probability: float | None = None


def ball_threshold(s: int, k: int) -> int:
    """``s! · 2^(s-1) · k^s``."""
    return math.factorial(s) * 2 ** (s - 1) * k**s


def patrol_cap(s: int, k: int) -> int:
    """``(s-1)! · 2^(s-2) · k^(s-1)`` for ``s >= 2``."""
    return math.factorial(s - 1) * 2 ** (s - 2) * k ** (s - 1)


def component_diameter_violation(g: Graph, x: frozenset[int], d: int) -> frozenset[int] | None:
    """A component of ``g - x`` whose vertex set has diameter ``>= d`` in ``g``."""
    for comp in components_after_removal(g, x):
        if len(comp) > 1 and set_diameter(g, comp) >= d:
            return comp
    return None


def in_base_case(size: int, k: int, d: int, base_threshold: int | None) -> bool:
    if base_threshold is not None:
        return size <= base_threshold
    return math.log2(size) <= log2_f(k, d)


def heaviest_geodesic(g: Graph, x: frozenset[int]):
    """Canonical geodesic between some pair with the most ``x`` vertices."""
    best, best_count = None, -1
    for u in g.vertices():
        for v in range(u + 1, g.n):
            p = geodesic_between(g, u, v)
            c = len(x.intersection(p.vertices))
            if c > best_count:
                best, best_count = p, c
    return best, best_count


def heaviest_ball(g: Graph, x: frozenset[int], radius: int) -> tuple[int, int]:
    best, best_count = 0, -1
    for v in g.vertices():
        c = len(ball(g, v, radius) & x)
        if c > best_count:
            best, best_count = v, c
    return best, best_count


def build_endgame(g: Graph, x, k: int, d: int, opts: MainOptions) -> tuple[CoverDispatchStrategy, CoverSets, DispatchTable]:
    """Cover sets, per-start levels and matchings, and the dispatch strategy."""
    x = frozenset(x)
    cover = sample_cover_sets(x, k, d, alpha_override=opts.alpha, seed=opts.seed,
                              probability_override=opts.cover_probability)
    params = LevelParams(k, d, cover.t, cover.alpha)
    table = build_dispatch_table(g, x, cover, params, seed=opts.seed)
    return CoverDispatchStrategy(g, x, cover, table), cover, table


def main_strategy(g: Graph, x, k: int, d: int, alpha: float | None = None,
                  base_threshold: int | None = None, seed: int = 0, force_endgame: bool = False,
                  cover_probability: float | None = None) -> Protector:
    """Strategy protecting ``x`` (plan in ``.plan``, certificate in ``.certificate``)."""
    x = frozenset(x)
    if k < 2 or d < 2:
        raise PreconditionError("main strategy needs k, d >= 2")
    for v in x:
        g._check(v)
    if not x:
        raise PreconditionError("nothing to protect: X is empty")
    g.require_connected()
    bad = component_diameter_violation(g, x, d)
    if bad is not None:
        raise PreconditionError(f"component {sorted(bad)} of G - X has diameter >= d={d}")
    opts = MainOptions(alpha, base_threshold, seed, force_endgame, cover_probability)
    return _protect(g, x, k, d, opts, tuple(g.vertices()), top=True)


def _protect(g: Graph, x: frozenset[int], k: int, d: int, opts: MainOptions, to_root, top: bool) -> Protector | None:
    if not x:
        return None
    forced = top and opts.force_endgame
    if not top and component_diameter_violation(g, x, d) is not None:
        prot = _base(g, x, to_root)
        prot.plan.flags.append("component-diameter-fallback")
        return prot
    if not forced and in_base_case(len(x), k, d, opts.base_threshold):
        return _base(g, x, to_root)

    def recurse(sub: Graph, sub_root):
        local_x = frozenset(i for i, v in enumerate(sub_root) if v in root_x)
        return _protect(sub, local_x, k, d, opts, sub_root, top=False)

    root_x = frozenset(to_root[v] for v in x)
    if not forced:
        path, on_path = heaviest_geodesic(g, x)
        center, in_ball = heaviest_ball(g, x, 1)
        if max(on_path, in_ball) >= k:
            if on_path >= in_ball:
                outer = geodesic_protector(g, path, to_root)
                outer.plan.params["x_hits"] = on_path
                outer.plan.params["geodesic_search"] = GEODESIC_SEARCH_NOTE
            else:
                outer = one_ball_protector(g, center, to_root)
                outer.plan.params["x_hits"] = in_ball
            return compose_protection(g, outer, recurse, to_root)
        s = 2
        while ball_threshold(s, k) <= len(x):
            v, count = heaviest_ball(g, x, s)
            if count >= ball_threshold(s, k):
                outer = patrol_protector(g, x, v, s, patrol_cap(s, k), to_root)
                outer.plan.params["x_hits"] = count
                return compose_protection(g, outer, recurse, to_root)
            s += 1
    return _endgame(g, x, k, d, opts, to_root)


def _base(g: Graph, x: frozenset[int], to_root) -> Protector:
    return stationary_protector(g, tuple(sorted(x)), x, "base-case", to_root)


def _endgame(g: Graph, x: frozenset[int], k: int, d: int, opts: MainOptions, to_root) -> Protector:
    strat, cover, table = build_endgame(g, x, k, d, opts)
    info = {
        "k": k, "d": d, "t": cover.t, "alpha": cover.alpha,
        "cover_sizes": tuple(len(c) for c in cover.sets),
        "resamples": tuple(cover.resample_count),
    }
    stuck = sorted(to_root[r] for r, lv in table.levels.items() if not lv.empty_at_top)
    if stuck:
        prot = _base(g, x, to_root)
        prot.plan.flags.append("endgame-fallback")
        prot.plan.params.update(info, nonempty_top_level_starts=tuple(stuck))
        return prot
    cert = strat.certificate()
    xs = frozenset(to_root[v] for v in x)
    plan = PlanNode("cover-dispatch", strat.n_cops, cert.threshold_step, removed=xs, protected=xs, params=info)
    return Protector(strat, cert, plan)


# ---------------------------------------------------------------------------
# capture strategy for vertex-cover graphs

def final_cop_protector(sub: Graph, sub_root) -> Protector:
    """One cop for a component of ``G - X``; with ``X`` a vertex cover these
    are single vertices, so walking in is the capture."""
    if sub.n != 1:
        raise PreconditionError("components of G - X should be single vertices")
    strat = StationaryCops(sub, (0,))
    cert = capture_certificate(sub, strat)
    plan = PlanNode("base-case", 1, cert.threshold_step, protected=frozenset(sub_root),
                    params={"role": "final-cop"})
    return Protector(strat, cert, plan)


@dataclass
class MeynielResult:
    protector: Protector
    report: BoundReport
    cover: frozenset[int]
    k: int

    @property
    def plan(self) -> PlanNode:
        return self.protector.plan

    @property
    def strategy(self):
        return self.protector.strategy

    @property
    def budget(self) -> int:
        return self.protector.budget


def meyniel_vc_strategy(g: Graph, k: int | None = None, alpha: float | None = None,
                        base_threshold: int | None = None, seed: int = 0, force_endgame: bool = False,
                        cover_probability: float | None = None) -> MeynielResult:
    """Capture strategy: protect a minimum vertex cover ``X`` with ``d = 2``,
    then send one more cop into the single-vertex component the robber is
    stuck in."""
    g.require_connected()
    x = min_vertex_cover(g)
    d = 2
    if k is None:
        k = theorem2_k(len(x), d).k if len(x) >= 2 else 2
    report = bound_report(k, d, max(len(x), 2), vc=len(x))
    if not x:
        strat = StationaryCops(g, (0,))
        prot = Protector(strat, capture_certificate(g, strat),
                         PlanNode("base-case", 1, 1, protected=frozenset(g.vertices())))
    else:
        main = main_strategy(g, x, k, d, alpha=alpha, base_threshold=base_threshold, seed=seed,
                             force_endgame=force_endgame, cover_probability=cover_probability)
        prot = compose_protection(g, main, final_cop_protector)
    report.realized_budget = prot.budget
    return MeynielResult(prot, report, x, k)
