"""Exact cop-number oracle by retrograde fixed-point marking.

Configurations are ``(sorted cop multiset, robber, side to move)``.  For each
cop multiset we keep a bitmask over robber vertices of the cop-turn
configurations already known to be won by the cops; one synchronous sweep
extends every mask by one cop move, so the sweep index at which a robber
vertex enters the mask is the number of steps to capture under optimal play.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from functools import cached_property

from .errors import BudgetExceededError, PreconditionError
from .game import CopStrategy, Observation, RobberStrategy
from .graph import Graph

DEFAULT_BUDGET = 50_000_000
NEVER = -1


def configured_budget() -> int:
    raw = os.environ.get("COPSHIELD_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def configuration_count(n: int, k: int) -> int:
    return math.comb(n + k - 1, k) * n * 2


@dataclass
class Solution:
    """Solved game for ``k`` cops on ``graph``."""

    graph: Graph
    k: int
    configs: list[tuple[int, ...]]
    index: dict[tuple[int, ...], int]
    occupied: list[int]
    succ: list[tuple[int, ...]]
    won: list[int]
    times: list[list[int]]
    sweeps: int
    closed: list[int] = field(repr=False, default_factory=list)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.graph.n) - 1

    @property
    def cops_win(self) -> bool:
        return self.winning_start is not None

    @cached_property
    def winning_start(self) -> tuple[int, ...] | None:
        for c, mask in enumerate(self.won):
            if mask == self.full_mask:
                return self.configs[c]
        return None

    def capture_time(self, cops: tuple[int, ...], robber: int) -> int:
        """Cop moves needed from a cop-turn configuration; ``NEVER`` if the robber escapes."""
        return self.times[self.index[tuple(sorted(cops))]][robber]

    def robber_turn_time(self, cops: tuple[int, ...], robber: int) -> int:
        """Cop moves still needed after the robber's best reply; ``NEVER`` if it escapes."""
        c = self.index[tuple(sorted(cops))]
        worst = 0
        for r in _bits(self.closed[robber] & ~self.occupied[c]):
            t = self.times[c][r]
            if t == NEVER:
                return NEVER
            worst = max(worst, t)
        return worst


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask(vertices) -> int:
    out = 0
    for v in vertices:
        out |= 1 << v
    return out


def _robber_turn_won(closed: list[int], n: int, occupied: int, won: int) -> int:
    """Robber-turn configurations whose every reply is a capture or a won cop turn.

    ``r`` fails exactly when its closed neighbourhood meets the unsafe set,
    i.e. when ``r`` lies in the closed neighbourhood of that set.
    """
    full = (1 << n) - 1
    bad = full & ~(occupied | won)
    reach = 0
    while bad:
        low = bad & -bad
        reach |= closed[low.bit_length() - 1]
        bad ^= low
    return (full & ~reach) | occupied


def sweep(sol_or_parts, won: list[int]) -> list[int]:
    """One synchronous marking sweep (exposed for idempotence checks)."""
    occupied, succ, closed, n = sol_or_parts
    robber = [_robber_turn_won(closed, n, occupied[c], won[c]) for c in range(len(won))]
    out = []
    for c in range(len(won)):
        acc = won[c]
        for c2 in succ[c]:
            acc |= robber[c2]
        out.append(acc)
    return out


def _fixed_point(parts, won: list[int]) -> tuple[list[int], list[list[int]], int]:
    """Iterate :func:`sweep` to its fixed point, recording first-marking sweeps."""
    occupied, succ, closed, n = parts
    size = len(won)
    full = (1 << n) - 1
    won = list(won)
    times = [[0 if m >> r & 1 else NEVER for r in range(n)] for m in occupied]
    sweeps = 0
    while True:
        robber = []
        for c in range(size):
            bad = full & ~(occupied[c] | won[c])
            reach = 0
            while bad:
                low = bad & -bad
                reach |= closed[low.bit_length() - 1]
                bad ^= low
            robber.append((full & ~reach) | occupied[c])
        changed = False
        nxt = []
        for c in range(size):
            acc = won[c]
            for c2 in succ[c]:
                acc |= robber[c2]
            nxt.append(acc)
            if acc != won[c]:
                changed = True
        if not changed:
            return won, times, sweeps
        sweeps += 1
        for c in range(size):
            fresh = nxt[c] & ~won[c]
            while fresh:
                low = fresh & -fresh
                times[c][low.bit_length() - 1] = sweeps
                fresh ^= low
        won = nxt


def solve(g: Graph, k: int, budget: int | None = None) -> Solution:
    """Mark all configurations for ``k`` cops on ``g`` to the fixed point."""
    g.require_connected()
    if k < 1:
        raise PreconditionError("need at least one cop")
    budget = configured_budget() if budget is None else budget
    size = configuration_count(g.n, k)
    if size > budget:
        raise BudgetExceededError(f"{size} configurations exceed budget {budget}")
    n = g.n
    configs = list(itertools.combinations_with_replacement(range(n), k))
    index = {c: i for i, c in enumerate(configs)}
    occupied = [_mask(c) for c in configs]
    moves = [g.closed_neighborhood(v) for v in range(n)]
    if k == 1:
        # config index == vertex, so the successors are the closed neighbourhoods
        succ = list(moves)
    else:
        succ = []
        for c in configs:
            nxt = {tuple(sorted(p)) for p in itertools.product(*(moves[v] for v in c))}
            succ.append(tuple(sorted(index[p] for p in nxt)))
    closed = [_mask(moves[v]) for v in range(n)]
    parts = (occupied, succ, closed, n)

    won, times, sweeps = _fixed_point(parts, occupied)
    return Solution(g, k, configs, index, occupied, succ, won, times, sweeps, closed)


def k_cops_win(g: Graph, k: int, budget: int | None = None) -> bool:
    return solve(g, k, budget).cops_win


def cop_number(g: Graph, k_max: int | None = None, budget: int | None = None) -> int:
    k_max = g.n if k_max is None else k_max
    for k in range(1, k_max + 1):
        if k_cops_win(g, k, budget):
            return k
    raise PreconditionError(f"cop number exceeds k_max={k_max}")


class OptimalRobber(RobberStrategy):
    """Stays inside robber-winning configurations; otherwise delays capture maximally."""

    def __init__(self, solution: Solution) -> None:
        self.sol = solution

    def _value(self, cops, v) -> float:
        if v in cops:
            return -1
        t = self.sol.capture_time(cops, v)
        return math.inf if t == NEVER else t

    def initial_placement(self, graph, cops):
        return max(graph.vertices(), key=lambda v: (self._value(cops, v), -v))

    def move(self, graph, obs):
        return max(graph.closed_neighborhood(obs.robber),
                   key=lambda v: (self._value(obs.cops, v), v == obs.robber, -v))


def optimal_robber_policy(g: Graph, k: int, solution: Solution | None = None) -> OptimalRobber:
    sol = solution if solution is not None else solve(g, k)
    if sol.graph is not g and sol.graph != g:
        raise PreconditionError("solution belongs to a different graph")
    return OptimalRobber(sol)


class OptimalCops(CopStrategy):
    """Cop strategy read off the solved configurations (shortest forced capture)."""

    def __init__(self, solution: Solution) -> None:
        if not solution.cops_win:
            raise PreconditionError(f"{solution.k} cops do not win on this graph")
        super().__init__(solution.graph, solution.k)
        self.sol = solution

    def initial_placements(self):
        return self.sol.winning_start

    def transition(self, state, obs):
        sol = self.sol
        cur = sol.index[tuple(sorted(obs.cops))]
        best, best_t = None, math.inf
        for c2 in sol.succ[cur]:
            target = sol.configs[c2]
            t = 0 if obs.robber in target else sol.robber_turn_time(target, obs.robber)
            if t == NEVER:
                continue
            if t < best_t:
                best, best_t = target, t
        if best is None:
            best = sol.configs[cur]
        return self._assign(obs.cops, best), state

    def _assign(self, cops, target):
        g = self.graph
        for perm in itertools.permutations(target):
            if all(a == b or b in g.neighbors(a) for a, b in zip(cops, perm)):
                return tuple(perm)
        raise AssertionError("successor configuration is not one joint move away")
