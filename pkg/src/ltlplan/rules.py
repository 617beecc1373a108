"""Shared LTL road rules checked over every plan."""

from __future__ import annotations

from .ltl import Formula, parse
from .sim.world import ALPHABET

PHI_STOP = (
    "G (in_stop_region -> (in_stop_region U has_stopped_in_stop_region))"
)
PHI_INTERSECTION = (
    "G ((in_intersection -> intersection_is_clear)"
    " & (!in_intersection U higher_priority))"
)


def road_rules() -> dict[str, Formula]:
    return {
        "stop_before_crossing": parse(PHI_STOP, ALPHABET),
        "yield_intersection": parse(PHI_INTERSECTION, ALPHABET),
    }
