"""One cop guarding a geodesic by shadowing the robber's projection onto it."""

from __future__ import annotations

from ..errors import PreconditionError
from ..game import CopStrategy, Observation, ProtectionCertificate
from ..graph import Geodesic, Graph, ball
from .base import Protector, pounce, stationary_protector, step_toward
from .plan import PlanNode


class GeodesicGuard(CopStrategy):
    """Shadow strategy on a geodesic ``P = p_0 .. p_L``.

    The shadow of a robber at ``r`` is ``p_j`` with ``j = min(L, dist(p_0, r))``.
    Off ``P`` the cop heads for ``p_0``; on ``P`` it steps along ``P`` toward
    the shadow.  Because ``dist(p_0, .)`` changes by at most one per robber
    move, a cop that has reached the shadow keeps it, and a robber stepping
    onto ``P`` steps onto its own shadow.  The strategy is stateless.
    """

    def __init__(self, graph: Graph, path: Geodesic, start: int | None = None) -> None:
        path.certify(graph)
        super().__init__(graph, 1)
        self.path = path
        self.start = path.start if start is None else graph._check(start)
        self._index = path.index_of()
        self._row = graph.distance_row(path.start)

    def shadow(self, robber: int) -> int:
        return min(self.path.length, self._row[robber])

    def initial_placements(self):
        return (self.start,)

    def transition(self, state, obs: Observation):
        hit = pounce(self.graph, tuple(obs.cops), obs.robber)
        if hit is not None:
            return hit, state
        (cop,) = obs.cops
        j = self._index.get(cop)
        if j is None:
            return (step_toward(self.graph, cop, self.path.start),), state
        target = self.shadow(obs.robber)
        if target > j:
            j += 1
        elif target < j:
            j -= 1
        return (self.path.vertices[j],), state

    def threshold(self) -> int:
        return self.graph.dist(self.start, self.path.start) + 2 * self.path.length + 1

    def certificate(self) -> ProtectionCertificate:
        return ProtectionCertificate(frozenset(self.path.vertices), 1, int(self.threshold()))


def geodesic_guard(g: Graph, p: Geodesic, to_root=None) -> tuple[CopStrategy, ProtectionCertificate]:
    strat = GeodesicGuard(g, p)
    return strat, strat.certificate()


def geodesic_protector(g: Graph, p: Geodesic, to_root) -> Protector:
    strat, cert = geodesic_guard(g, p)
    verts = frozenset(to_root[v] for v in p.vertices)
    plan = PlanNode("geodesic-guard", 1, cert.threshold_step, removed=verts, protected=verts,
                    params={"path": tuple(to_root[v] for v in p.vertices), "length": p.length})
    return Protector(strat, cert, plan)


def one_ball_guard(g: Graph, w: int) -> tuple[CopStrategy, ProtectionCertificate]:
    """One cop parked on ``w`` protects ``B(w, 1)``."""
    p = one_ball_protector(g, w, tuple(g.vertices()))
    return p.strategy, p.certificate


def one_ball_protector(g: Graph, w: int, to_root) -> Protector:
    region = ball(g, w, 1)
    if not region:
        raise PreconditionError("empty ball")
    return stationary_protector(g, (w,), region, "one-ball", to_root, center=to_root[w])
