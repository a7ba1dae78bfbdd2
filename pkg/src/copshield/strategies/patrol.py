"""Rotating patrols that protect ``B(v, s) ∩ X`` when every ``(s-1)``-ball
holds at most ``K`` vertices of ``X``.

``2s`` patrols of ``K`` cops start on the hub ``v``.  Local step 0 is the
step right after the cops stand together on ``v``.  At each local step
``i >= 1`` patrol ``i mod 2s`` is sent to ``A_i = B(v,s) ∩ B(r_i,s-1) ∩ X``
where ``r_i`` is the robber's vertex when the step begins; each cop walks
out along a fixed geodesic, waits on its target until local step
``i + s - 1`` and walks back, so it is home again by ``i + 2s - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import PreconditionError
from ..game import CopStrategy, Observation, ProtectionCertificate, Trace, COP_MOVE
from ..graph import Graph, ball, geodesic_between
from .base import Protector, step_toward
from .plan import PlanNode


@dataclass(frozen=True)
class ScheduleEntry:
    cop: int
    dispatch_step: int  # local step
    target: int
    route: tuple[int, ...]  # hub .. target
    dwell: tuple[int, int]  # first and last local step ending on the target
    home_by: int  # local step after whose cop move the cop is back on the hub


@dataclass
class PatrolPlan:
    anchor: int
    radius: int
    cap: int
    protected_target: frozenset[int]
    x: frozenset[int]
    patrols: tuple[tuple[int, ...], ...]
    routes: dict[int, tuple[int, ...]] = field(repr=False, default_factory=dict)

    @property
    def n_cops(self) -> int:
        return 2 * self.radius * self.cap

    def targets(self, g: Graph, robber: int) -> tuple[int, ...]:
        """``A_i`` for a robber seen on ``robber`` (sorted)."""
        near = ball(g, robber, self.radius - 1)
        return tuple(sorted(self.protected_target & near))

    def assignment(self, targets: tuple[int, ...]) -> tuple[int | None, ...]:
        """Surjective map of the ``K`` cops of a patrol onto ``targets`` (``None`` = stay home)."""
        if len(targets) > self.cap:
            raise PreconditionError(f"{len(targets)} targets exceed patrol size {self.cap}")
        if not targets:
            return (None,) * self.cap
        return tuple(targets[m % len(targets)] for m in range(self.cap))

    def position(self, target: int | None, elapsed: int) -> int:
        """Where a cop sent to ``target`` stands after the cop move ``elapsed``
        local steps after its dispatch step."""
        if target is None:
            return self.anchor
        route = self.routes[target]
        far = len(route) - 1
        s = self.radius
        if elapsed <= s - 1:
            return route[min(elapsed + 1, far)]
        return route[max(far - (elapsed - s + 1), 0)]

    def entries(self, g: Graph, patrol: int, step: int, robber: int) -> list[ScheduleEntry]:
        """Schedule entries created by dispatching ``patrol`` at local ``step``."""
        out = []
        targets = self.targets(g, robber)
        for m, tgt in enumerate(self.assignment(targets)):
            if tgt is None:
                continue
            route = self.routes[tgt]
            far = len(route) - 1
            arrive = step + max(far, 1) - 1
            out.append(ScheduleEntry(self.patrols[patrol][m], step, tgt, route,
                                     (arrive, step + self.radius - 1), step + self.radius + far - 1))
        return out


def schedule_feasible(plan: PatrolPlan, entries: list[ScheduleEntry]) -> list[str]:
    """Problems with a list of schedule entries (empty list = feasible)."""
    problems = []
    s = plan.radius
    by_cop: dict[int, list[ScheduleEntry]] = {}
    for e in entries:
        if e.target not in plan.routes:
            problems.append(f"cop {e.cop}: target {e.target} outside B(v,s)")
        if e.dwell[0] > e.dispatch_step + s - 1:
            problems.append(f"cop {e.cop}: arrives at {e.dwell[0]} after {e.dispatch_step + s - 1}")
        if e.home_by > e.dispatch_step + 2 * s - 1:
            problems.append(f"cop {e.cop}: home at {e.home_by} after {e.dispatch_step + 2 * s - 1}")
        by_cop.setdefault(e.cop, []).append(e)
    for cop, mine in by_cop.items():
        mine.sort(key=lambda e: e.dispatch_step)
        for a, b in zip(mine, mine[1:]):
            if b.dispatch_step <= a.home_by:
                problems.append(f"cop {cop}: entries at {a.dispatch_step} and {b.dispatch_step} overlap")
    return problems


class PatrolStrategy(CopStrategy):
    """Stateful patrol rotation; the state records only what fixes future moves."""

    def __init__(self, graph: Graph, plan: PatrolPlan, start: tuple[int, ...] | None = None) -> None:
        super().__init__(graph, plan.n_cops)
        self.plan = plan
        self.start = tuple(start) if start is not None else (plan.anchor,) * plan.n_cops
        if len(self.start) != plan.n_cops:
            raise PreconditionError("one start vertex per cop is required")
        self.gather_time = max(int(graph.dist(v, plan.anchor)) for v in self.start)

    def initial_placements(self):
        return self.start

    def initial_state(self):
        if self.gather_time:
            return ("gather",)
        return ("ready",)

    def transition(self, state, obs: Observation):
        plan = self.plan
        period = 2 * plan.radius
        if state[0] == "gather":
            moved = tuple(step_toward(self.graph, c, plan.anchor) for c in obs.cops)
            done = all(c == plan.anchor for c in moved)
            return moved, ("ready",) if done else state
        if state[0] == "ready":
            # local step 0: everybody stays on the hub
            return obs.cops, ("run", 0, (None,) * period)
        _, last, sent = state
        i = (last + 1) % period
        sent = sent[:i] + (plan.targets(self.graph, obs.robber),) + sent[i + 1:]
        return self._positions(i, sent), ("run", i, sent)

    def _positions(self, i: int, sent) -> tuple[int, ...]:
        plan = self.plan
        period = 2 * plan.radius
        out = [plan.anchor] * plan.n_cops
        for p, targets in enumerate(sent):
            if targets is None:
                continue
            elapsed = (i - p) % period
            for cop, tgt in zip(plan.patrols[p], plan.assignment(targets)):
                out[cop] = plan.position(tgt, elapsed)
        return tuple(out)

    def local_step_offset(self) -> int:
        """Game step of local step 0."""
        return self.gather_time + 1

    def threshold(self) -> int:
        return self.local_step_offset() + self.plan.radius

    def certificate(self) -> ProtectionCertificate:
        return ProtectionCertificate(self.plan.protected_target, self.n_cops, self.threshold())

    def schedule_from_trace(self, trace: Trace) -> list[ScheduleEntry]:
        """Schedule entries realised in a recorded game."""
        offset = self.local_step_offset()
        period = 2 * self.plan.radius
        out = []
        for step, robber in trace.robber_at_cop_moves():
            local = step - offset
            if local >= 1:
                out.extend(self.plan.entries(self.graph, local % period, local, robber))
        return out


def check_patrol_precondition(g: Graph, x: frozenset[int], s: int, k_cap: int) -> int | None:
    """First vertex ``w`` with ``|B(w, s-1) ∩ x| > K``, or ``None``."""
    for w in g.vertices():
        if len(ball(g, w, s - 1) & x) > k_cap:
            return w
    return None


def build_patrol_plan(g: Graph, x, v: int, s: int, k_cap: int) -> PatrolPlan:
    x = frozenset(x)
    g._check(v)
    for u in x:
        g._check(u)
    if s < 1 or k_cap < 1:
        raise PreconditionError("patrol needs s >= 1 and K >= 1")
    bad = check_patrol_precondition(g, x, s, k_cap)
    if bad is not None:
        raise PreconditionError(f"|B({bad}, {s - 1}) ∩ X| exceeds K={k_cap}")
    region = ball(g, v, s)
    routes = {u: geodesic_between(g, v, u).vertices for u in sorted(region)}
    patrols = tuple(tuple(range(j * k_cap, (j + 1) * k_cap)) for j in range(2 * s))
    return PatrolPlan(v, s, k_cap, region & x, x, patrols, routes)


def build_patrol(g: Graph, x, v: int, s: int, k_cap: int) -> tuple[PatrolStrategy, ProtectionCertificate]:
    strat = PatrolStrategy(g, build_patrol_plan(g, x, v, s, k_cap))
    return strat, strat.certificate()


def patrol_protector(g: Graph, x, v: int, s: int, k_cap: int, to_root) -> Protector:
    strat, cert = build_patrol(g, x, v, s, k_cap)
    prot = frozenset(to_root[u] for u in cert.protected_set)
    plan = PlanNode("patrol", strat.n_cops, cert.threshold_step, removed=prot, protected=prot,
                    params={"anchor": to_root[v], "s": s, "K": k_cap})
    return Protector(strat, cert, plan)


def patrol_capture_violations(strategy: PatrolStrategy, trace: Trace) -> list[int]:
    """Steps where the robber stood on the protected set at a local step
    ``>= s`` and no cop ended that cop move on its vertex."""
    plan = strategy.plan
    offset = strategy.local_step_offset()
    bad = []
    for snap_i, snap in enumerate(trace.snapshots):
        if snap.phase != COP_MOVE:
            continue
        robber = trace.snapshots[snap_i - 1].robber
        local = snap.step - offset
        if local >= plan.radius and robber in plan.protected_target and robber not in snap.cops:
            bad.append(snap.step)
    return bad
