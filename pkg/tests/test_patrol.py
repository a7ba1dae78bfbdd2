from __future__ import annotations

import pytest

from copshield import generators as G
from copshield.errors import PreconditionError
from copshield.game import GreedyRobber, RandomRobber, best_response_robber, run_game, verify_protection
from copshield.graph import ball
from copshield.strategies.patrol import (ScheduleEntry, build_patrol, build_patrol_plan, check_patrol_precondition,
                                         patrol_capture_violations, schedule_feasible)


def test_c8_patrol_verifies():
    g = G.cycle(8)
    strat, cert = build_patrol(g, {0, 4}, 0, 2, 1)
    assert cert.cop_budget == 4
    assert cert.protected_set == {0}
    assert verify_protection(g, strat, cert).ok


@pytest.mark.parametrize("s", [1, 2, 3])
def test_grid_patrols(s):
    g = G.grid(3, 4)
    x = frozenset({0, 3, 5, 6, 8, 11})
    k_cap = max(len(ball(g, w, s - 1) & x) for w in g.vertices())
    strat, cert = build_patrol(g, x, 5, s, k_cap)
    assert cert.cop_budget == 2 * s * k_cap
    assert cert.protected_set == ball(g, 5, s) & x
    assert cert.threshold_step == strat.local_step_offset() + s
    assert verify_protection(g, strat, cert).ok
    for robber in (GreedyRobber(), RandomRobber(s)):
        trace = run_game(g, strat, robber, horizon=50)
        assert schedule_feasible(strat.plan, strat.schedule_from_trace(trace)) == []
        assert patrol_capture_violations(strat, trace) == []


def test_gathering_from_elsewhere_shifts_the_threshold():
    g = G.cycle(8)
    plan = build_patrol_plan(g, {0, 4}, 0, 2, 1)
    from copshield.strategies.patrol import PatrolStrategy
    strat = PatrolStrategy(g, plan, start=(2, 1, 7, 0))
    assert strat.gather_time == 2
    assert strat.threshold() == 2 + 1 + 2
    assert verify_protection(g, strat, strat.certificate()).ok


def test_precondition_is_enforced():
    g = G.star(5)
    x = set(range(1, 6))
    assert check_patrol_precondition(g, frozenset(x), 2, 3) == 0
    with pytest.raises(PreconditionError):
        build_patrol(g, x, 0, 2, 3)
    with pytest.raises(PreconditionError):
        build_patrol(g, x, 0, 0, 3)


def test_assignment_is_surjective():
    g = G.cycle(8)
    plan = build_patrol_plan(g, {0, 1, 4}, 0, 2, 2)
    assert set(plan.assignment((0, 1))) == {0, 1}
    assert plan.assignment(()) == (None, None)
    with pytest.raises(PreconditionError):
        plan.assignment((0, 1, 7))


def test_schedule_checker_flags_overlaps_and_late_returns():
    g = G.cycle(8)
    plan = build_patrol_plan(g, {0, 4}, 0, 2, 1)
    route = plan.routes[0]
    good = ScheduleEntry(0, 1, 0, route, (1, 2), 2)
    assert schedule_feasible(plan, [good]) == []
    late = ScheduleEntry(0, 1, 0, route, (3, 3), 6)
    assert len(schedule_feasible(plan, [late])) == 2
    clash = ScheduleEntry(0, 2, 0, route, (2, 3), 3)
    assert any("overlap" in p for p in schedule_feasible(plan, [good, clash]))


def test_best_response_cannot_stay_on_the_target():
    g = G.cycle(8)
    strat, cert = build_patrol(g, {0, 4}, 0, 2, 1)
    trace = best_response_robber(g, strat).trace
    assert patrol_capture_violations(strat, trace) == []
