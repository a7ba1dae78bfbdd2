"""Protection strategies, their certificates, and recursive composition."""

from .base import Protector, StationaryCops, capture_certificate
from .compose import ComposedStrategy, compose_protection
from .cover import (CoverDispatchStrategy, CoverSets, build_adaptive_levels, build_dispatch_table,
                    hall_match, sample_cover_sets)
from .epsilon import EpsilonResult, epsilon_strategy
from .guard import GeodesicGuard, geodesic_guard, one_ball_guard
from .main import MeynielResult, main_strategy, meyniel_vc_strategy
from .patrol import PatrolPlan, PatrolStrategy, build_patrol, schedule_feasible
from .plan import PlanNode, ProtectionPlan

__all__ = [
    "ComposedStrategy", "CoverDispatchStrategy", "CoverSets", "EpsilonResult", "GeodesicGuard",
    "MeynielResult", "PatrolPlan", "PatrolStrategy", "PlanNode", "ProtectionPlan", "Protector",
    "StationaryCops", "build_adaptive_levels", "build_dispatch_table", "build_patrol",
    "capture_certificate", "compose_protection", "epsilon_strategy", "geodesic_guard",
    "hall_match", "main_strategy", "meyniel_vc_strategy", "one_ball_guard", "sample_cover_sets",
    "schedule_feasible",
]
