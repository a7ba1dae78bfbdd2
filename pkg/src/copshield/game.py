"""Game semantics, strategy interfaces, traces, and adversarial verification.

Rules: the cops place themselves (several may share a vertex), then the
robber places.  Each later step is a cop half-step followed by a robber
half-step, and every piece either stays or crosses one edge.  Capture is
checked after every half-step.

Cop strategies are deterministic state machines.  Their state is an
immutable, hashable value that doubles as the strategy's *digest*: together
with the observed positions it fixes every future move.  The best-response
search relies on that to memoise the game graph.
"""

from __future__ import annotations

import json
import os
import random
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, NamedTuple, Sequence

from .errors import BudgetExceededError, IllegalMoveError, PreconditionError
from .graph import Graph

COP_PLACEMENT = "cop-placement"
ROBBER_PLACEMENT = "robber-placement"
COP_MOVE = "cop-move"
ROBBER_MOVE = "robber-move"

DEFAULT_SEARCH_BUDGET = 3_000_000


def default_horizon(g: Graph) -> int:
    return 4 * g.n * g.n


class Observation(NamedTuple):
    """What a player sees before moving: every cop and the robber."""

    cops: tuple[int, ...]
    robber: int


@dataclass(frozen=True)
class ProtectionCertificate:
    """Claim: a robber standing in ``protected_set`` when the cops move at a
    step ``>= threshold_step`` is caught eventually."""

    protected_set: frozenset[int]
    cop_budget: int
    threshold_step: int

    def __post_init__(self) -> None:
        if self.cop_budget < 1:
            raise ValueError("a certificate needs at least one cop")
        if self.threshold_step < 0:
            raise ValueError("threshold must be nonnegative")


class CopStrategy(ABC):
    """Deterministic cop strategy on ``graph``.

    Subclasses implement :meth:`initial_placements`, :meth:`initial_state`
    and the pure :meth:`transition`.  Strategies must keep any notion of time
    inside their state (capped so the state space stays finite); the engine
    never passes the step number.
    """

    graph: Graph
    n_cops: int

    def __init__(self, graph: Graph, n_cops: int) -> None:
        self.graph = graph
        self.n_cops = n_cops
        self._state: Hashable = None

    @property
    def requested_cop_count(self) -> int:
        return self.n_cops

    @abstractmethod
    def initial_placements(self) -> tuple[int, ...]: ...

    def initial_state(self) -> Hashable:
        return ()

    @abstractmethod
    def transition(self, state: Hashable, obs: Observation) -> tuple[tuple[int, ...], Hashable]: ...

    def certificate(self) -> ProtectionCertificate | None:
        return None

    # stateful convenience wrapper used by the engine ----------------------
    def reset(self) -> None:
        self._state = self.initial_state()

    def move(self, obs: Observation) -> tuple[int, ...]:
        positions, self._state = self.transition(self._state, obs)
        return positions

    def digest(self) -> Hashable:
        return self._state

    def restore(self, digest: Hashable) -> None:
        self._state = digest


class RobberStrategy(ABC):
    @abstractmethod
    def initial_placement(self, graph: Graph, cops: tuple[int, ...]) -> int: ...

    @abstractmethod
    def move(self, graph: Graph, obs: Observation) -> int: ...


# ---------------------------------------------------------------------------
# robbers

class StationaryRobber(RobberStrategy):
    def __init__(self, vertex: int) -> None:
        self.vertex = vertex

    def initial_placement(self, graph, cops):
        return self.vertex

    def move(self, graph, obs):
        return obs.robber


class GreedyRobber(RobberStrategy):
    """Maximise distance to the nearest cop; ties prefer staying, then low ids."""

    def initial_placement(self, graph, cops):
        return max(graph.vertices(), key=lambda v: (self._score(graph, cops, v), -v))

    def move(self, graph, obs):
        options = graph.closed_neighborhood(obs.robber)
        return max(options, key=lambda v: (self._score(graph, obs.cops, v), v == obs.robber, -v))

    @staticmethod
    def _score(graph, cops, v):
        row = graph.distance_row(v)
        return min(row[c] for c in cops) if cops else 0


class RandomRobber(RobberStrategy):
    """Uniform random legal moves that avoid stepping onto a cop when possible."""

    def __init__(self, seed: int) -> None:
        self.rng = random.Random(seed)

    def initial_placement(self, graph, cops):
        free = [v for v in graph.vertices() if v not in cops] or list(graph.vertices())
        return self.rng.choice(free)

    def move(self, graph, obs):
        opts = graph.closed_neighborhood(obs.robber)
        safe = [v for v in opts if v not in obs.cops] or list(opts)
        return self.rng.choice(safe)


class ScriptedRobber(RobberStrategy):
    """Replays a fixed placement and move list, then stands still."""

    def __init__(self, placement: int, moves: Sequence[int]) -> None:
        self.placement = placement
        self.moves = list(moves)
        self._i = 0

    def initial_placement(self, graph, cops):
        self._i = 0
        return self.placement

    def move(self, graph, obs):
        if self._i < len(self.moves):
            self._i += 1
            return self.moves[self._i - 1]
        return obs.robber


# ---------------------------------------------------------------------------
# traces

@dataclass(frozen=True)
class Snapshot:
    step: int
    phase: str
    cops: tuple[int, ...]
    robber: int | None
    captured: bool

    def to_record(self) -> dict:
        return {"step": self.step, "phase": self.phase, "cops": list(self.cops),
                "robber": self.robber, "captured": self.captured}


@dataclass
class Trace:
    snapshots: list[Snapshot] = field(default_factory=list)
    outcome: str = "horizon"  # captured | horizon | repetition
    capture_step: int | None = None

    @property
    def captured(self) -> bool:
        return self.outcome == "captured"

    @property
    def final(self) -> Snapshot:
        return self.snapshots[-1]

    def robber_at_cop_moves(self) -> list[tuple[int, int]]:
        """``(step, robber vertex)`` seen by the cops at each cop half-step."""
        out = []
        robber = None
        for snap in self.snapshots:
            if snap.phase == COP_MOVE:
                out.append((snap.step, robber))
            robber = snap.robber
        return out

    def to_jsonl(self) -> str:
        lines = [json.dumps(s.to_record()) for s in self.snapshots]
        lines.append(json.dumps({"outcome": self.outcome, "capture_step": self.capture_step}))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "Trace":
        trace = cls()
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            if "outcome" in rec:
                trace.outcome = rec["outcome"]
                trace.capture_step = rec["capture_step"]
            else:
                trace.snapshots.append(Snapshot(rec["step"], rec["phase"], tuple(rec["cops"]),
                                                rec["robber"], rec["captured"]))
        return trace


def replay(g: Graph, trace: Trace) -> None:
    """Re-check every snapshot: legal moves, correct capture flags, correct outcome."""
    prev = None
    for snap in trace.snapshots:
        hit = snap.robber is not None and snap.robber in snap.cops
        if snap.captured != hit:
            raise IllegalMoveError("capture flag disagrees with positions", snap.step)
        if prev is not None:
            if len(prev.cops) != len(snap.cops):
                raise IllegalMoveError("cop count changed", snap.step)
            for a, b in zip(prev.cops, snap.cops):
                if g.dist(a, b) > 1:
                    raise IllegalMoveError(f"cop jumped {a}->{b}", snap.step)
            if prev.robber is not None and snap.robber is not None and g.dist(prev.robber, snap.robber) > 1:
                raise IllegalMoveError(f"robber jumped {prev.robber}->{snap.robber}", snap.step)
        prev = snap
    if trace.captured != any(s.captured for s in trace.snapshots):
        raise IllegalMoveError("outcome disagrees with snapshots")


# ---------------------------------------------------------------------------
# running games

def _check_positions(g: Graph, cops: CopStrategy, new: Sequence[int], old: Sequence[int] | None, step: int) -> tuple[int, ...]:
    new = tuple(new)
    if len(new) != cops.n_cops:
        raise IllegalMoveError(f"strategy returned {len(new)} positions for {cops.n_cops} cops", step)
    for i, v in enumerate(new):
        if not isinstance(v, int) or not 0 <= v < g.n:
            raise IllegalMoveError(f"cop {i} sent to invalid vertex {v!r}", step)
        if old is not None and v != old[i] and v not in g.neighbors(old[i]):
            raise IllegalMoveError(f"cop {i} moved {old[i]}->{v}, not an edge", step)
    return new


def run_game(g: Graph, cops: CopStrategy, robber: RobberStrategy, horizon: int | None = None,
             step_cap: int = 0) -> Trace:
    """Play one game and record every half-step.

    Stops on capture, after ``horizon`` steps, or when the full state (cop
    digest, positions, and ``min(step, step_cap)``) repeats at a cop turn.
    """
    g.require_connected()
    horizon = default_horizon(g) if horizon is None else horizon
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    trace = Trace()
    cops.reset()
    pos = _check_positions(g, cops, cops.initial_placements(), None, 0)
    trace.snapshots.append(Snapshot(0, COP_PLACEMENT, pos, None, False))
    r = robber.initial_placement(g, pos)
    if not isinstance(r, int) or not 0 <= r < g.n:
        raise IllegalMoveError(f"robber placed on invalid vertex {r!r}", 0)
    trace.snapshots.append(Snapshot(0, ROBBER_PLACEMENT, pos, r, r in pos))
    if r in pos:
        trace.outcome, trace.capture_step = "captured", 0
        return trace
    seen = set()
    for step in range(1, horizon + 1):
        key = (cops.digest(), pos, r, min(step, step_cap))
        if key in seen:
            trace.outcome = "repetition"
            return trace
        seen.add(key)
        obs = Observation(pos, r)
        pos = _check_positions(g, cops, cops.move(obs), pos, step)
        trace.snapshots.append(Snapshot(step, COP_MOVE, pos, r, r in pos))
        if r in pos:
            trace.outcome, trace.capture_step = "captured", step
            return trace
        nr = robber.move(g, Observation(pos, r))
        if nr != r and nr not in g.neighbors(r):
            raise IllegalMoveError(f"robber moved {r}->{nr}, not an edge", step)
        r = nr
        trace.snapshots.append(Snapshot(step, ROBBER_MOVE, pos, r, r in pos))
        if r in pos:
            trace.outcome, trace.capture_step = "captured", step
            return trace
    trace.outcome = "horizon"
    return trace


# ---------------------------------------------------------------------------
# exhaustive robber search

@dataclass
class SearchResult:
    """Outcome of the exhaustive robber search against a fixed cop strategy.

    ``verdict`` is ``"captured"`` when every robber line is caught within the
    horizon, ``"survived"`` when some line avoids capture forever, and
    ``"horizon"`` when every line is caught but some only after the horizon.
    """

    verdict: str
    trace: Trace
    max_capture_step: int | None
    states: int

    @property
    def captured(self) -> bool:
        return self.verdict == "captured"


class _GameGraph:
    """Cop-turn nodes ``(strategy state, cop positions, robber, capped step)``."""

    def __init__(self, g: Graph, cops: CopStrategy, step_cap: int, budget: int) -> None:
        self.g = g
        self.cops = cops
        self.cap = step_cap
        self.index: dict[tuple, int] = {}
        self.nodes: list[tuple] = []
        self.succ: list[tuple[int, ...]] = []
        self.moves: list[tuple[int, ...]] = []  # robber vertex chosen for each successor
        self.placements = _check_positions(g, cops, cops.initial_placements(), None, 0)
        s0 = cops.initial_state()
        self.roots = {}
        for r in g.vertices():
            if r not in self.placements:
                self.roots[r] = self._add((s0, self.placements, r, min(1, step_cap)), budget)
        i = 0
        while i < len(self.nodes):
            self._expand(i, budget)
            i += 1

    def _add(self, key: tuple, budget: int) -> int:
        idx = self.index.get(key)
        if idx is None:
            if len(self.nodes) >= budget:
                raise BudgetExceededError(f"best-response search exceeded {budget} states")
            idx = len(self.nodes)
            self.index[key] = idx
            self.nodes.append(key)
        return idx

    def _expand(self, i: int, budget: int) -> None:
        state, pos, r, t = self.nodes[i]
        new_pos, new_state = self.cops.transition(state, Observation(pos, r))
        new_pos = _check_positions(self.g, self.cops, new_pos, pos, t)
        if r in new_pos:
            self.succ.append(())
            self.moves.append(())
            return
        nt = min(t + 1, self.cap)
        succ, moves = [], []
        for nr in self.g.closed_neighborhood(r):
            if nr in new_pos:
                continue
            succ.append(self._add((new_state, new_pos, nr, nt), budget))
            moves.append(nr)
        self.succ.append(tuple(succ))
        self.moves.append(tuple(moves))

    def doomed_times(self) -> list[int]:
        """Steps until capture under robber-optimal play; ``-1`` where the robber survives."""
        n = len(self.nodes)
        pending = [len(s) for s in self.succ]
        preds: list[list[int]] = [[] for _ in range(n)]
        for i, s in enumerate(self.succ):
            for j in s:
                preds[j].append(i)
        time = [-1] * n
        queue = deque(i for i in range(n) if pending[i] == 0)
        for i in queue:
            time[i] = 1
        while queue:
            j = queue.popleft()
            for i in preds[j]:
                pending[i] -= 1
                if pending[i] == 0:
                    time[i] = 1 + max(time[k] for k in self.succ[i])
                    queue.append(i)
        return time


def _scripted_trace(g: Graph, cops: CopStrategy, gg: _GameGraph, path: list[int], horizon: int) -> Trace:
    root_r = gg.nodes[path[0]][2]
    moves = [gg.nodes[b][2] for b in path[1:]]
    return run_game(g, cops, ScriptedRobber(root_r, moves), horizon=max(horizon, len(path) + 1),
                    step_cap=gg.cap)


def _survival_walk(gg: _GameGraph, start: int, alive: Sequence[bool], prefix: list[int]) -> list[int]:
    path = list(prefix) + [start]
    seen = set(path)
    cur = start
    while True:
        nxt = next(j for j in gg.succ[cur] if alive[j])
        path.append(nxt)
        if nxt in seen:
            return path
        seen.add(nxt)
        cur = nxt


def _longest_capture_walk(gg: _GameGraph, start: int, time: Sequence[int]) -> list[int]:
    path = [start]
    cur = start
    while gg.succ[cur]:
        cur = max(gg.succ[cur], key=lambda j: time[j])
        path.append(cur)
    return path


def best_response_robber(g: Graph, cops: CopStrategy, horizon: int | None = None,
                         budget: int = DEFAULT_SEARCH_BUDGET) -> SearchResult:
    """Search every robber line against the deterministic ``cops``.

    Returns a trace ending in a repetition (an escaping cycle) when the
    robber can avoid capture forever, otherwise the slowest capture line.
    """
    g.require_connected()
    horizon = default_horizon(g) if horizon is None else horizon
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    gg = _GameGraph(g, cops, 0, budget)
    time = gg.doomed_times()
    alive = [t < 0 for t in time]
    for r, root in sorted(gg.roots.items()):
        if alive[root]:
            path = _survival_walk(gg, root, alive, [])
            return SearchResult("survived", _scripted_trace(g, cops, gg, path, horizon),
                                None, len(gg.nodes))
    if not gg.roots:
        trace = run_game(g, cops, StationaryRobber(0), horizon=horizon)
        return SearchResult("captured", trace, 0, len(gg.nodes))
    root = max(sorted(gg.roots.values()), key=lambda i: time[i])
    worst = time[root]
    trace = _scripted_trace(g, cops, gg, _longest_capture_walk(gg, root, time), horizon)
    verdict = "captured" if worst <= horizon else "horizon"
    return SearchResult(verdict, trace, worst, len(gg.nodes))


@dataclass
class VerificationResult:
    ok: bool
    witness: Trace | None
    states: int

    def __bool__(self) -> bool:
        return self.ok


def verify_protection(g: Graph, cops: CopStrategy, cert: ProtectionCertificate,
                      budget: int = DEFAULT_SEARCH_BUDGET, horizon: int | None = None) -> VerificationResult:
    """True iff no robber line stands in the protected set at a cop turn of a
    step ``>= cert.threshold_step`` and then escapes forever."""
    g.require_connected()
    if cert.cop_budget != cops.n_cops:
        raise PreconditionError(f"certificate budget {cert.cop_budget} != strategy cops {cops.n_cops}")
    if not cert.protected_set:
        return VerificationResult(True, None, 0)
    cap = max(cert.threshold_step, 1)
    gg = _GameGraph(g, cops, cap, budget)
    alive = [t < 0 for t in gg.doomed_times()]
    bad = None
    for i, (state, pos, r, t) in enumerate(gg.nodes):
        if alive[i] and t >= cert.threshold_step and r in cert.protected_set:
            bad = i
            break
    if bad is None:
        return VerificationResult(True, None, len(gg.nodes))
    # shortest prefix from a root to the violating node
    parent = {root: None for root in gg.roots.values()}
    queue = deque(sorted(gg.roots.values()))
    while queue:
        a = queue.popleft()
        if a == bad:
            break
        for b in gg.succ[a]:
            if b not in parent:
                parent[b] = a
                queue.append(b)
    prefix = []
    cur = bad
    while cur is not None:
        prefix.append(cur)
        cur = parent[cur]
    prefix.reverse()
    path = _survival_walk(gg, bad, alive, prefix[:-1])
    horizon = default_horizon(g) if horizon is None else horizon
    return VerificationResult(False, _scripted_trace(g, cops, gg, path, horizon), len(gg.nodes))


def robber_positions_by_step(trace: Trace) -> dict[int, int]:
    """Robber vertex at the *end* of each step (after its half-step)."""
    out = {}
    for snap in trace.snapshots:
        if snap.phase in (ROBBER_PLACEMENT, ROBBER_MOVE):
            out[snap.step] = snap.robber
    return out


def capture_steps(traces: Iterable[Trace]) -> list[int | None]:
    return [t.capture_step for t in traces]
