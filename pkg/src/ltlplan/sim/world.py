"""World state, label function, crossing priority, and the step function.

The planner agent is always actor 0. All randomness lives in scenario
generation; advancing the world is a pure function of (state, control).
`advance_world` returns a fresh value; the in-place variant exists for
owners of private clones (rollouts) that step many times per snapshot.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .road import (
    APPROACH_ORDINAL,
    FRONT_EXTENT,
    REAR_OVERHANG as REAR_OVERHANG_,
    STOPPED_SPEED,
    RoadEnvironment,
)
from .vehicle import VehicleState

AP_ORDER = (
    "not_in_stop_region",
    "has_entered_stop_region",
    "has_stopped_in_stop_region",
    "in_stop_region",
    "in_intersection",
    "over_speed_limit",
    "on_route",
    "intersection_is_clear",
    "higher_priority",
)

ALPHABET = frozenset(AP_ORDER)


class Policy(enum.IntEnum):
    PLANNER = 0
    SCRIPTED = 1
    STOPPED = 2  # stalled obstacle vehicle


class Status(enum.Enum):
    RUNNING = "running"
    COLLIDED = "collided"
    CONSTRAINT_VIOLATED = "constraint_violated"
    GOAL_REACHED = "goal_reached"
    TIMEOUT = "timeout"


@dataclass(slots=True)
class ActorState:
    vehicle: VehicleState
    route: int = 0
    lane: int = 0
    waited: float = 0.0
    has_entered_stop_region: bool = False
    has_stopped_in_stop_region: bool = False
    has_entered_intersection: bool = False
    in_stop_region: bool = False
    in_intersection: bool = False
    policy: Policy = Policy.SCRIPTED

    def clone(self) -> "ActorState":
        return ActorState(
            self.vehicle.clone(), self.route, self.lane, self.waited,
            self.has_entered_stop_region, self.has_stopped_in_stop_region,
            self.has_entered_intersection, self.in_stop_region,
            self.in_intersection, self.policy,
        )


@dataclass(slots=True)
class WorldState:
    env: RoadEnvironment
    actors: list[ActorState] = field(default_factory=list)
    time: float = 0.0
    status: Status = Status.RUNNING
    granted: int = -1  # actor index holding the crossing grant, -1 for none

    def clone(self) -> "WorldState":
        return WorldState(self.env, [a.clone() for a in self.actors],
                          self.time, self.status, self.granted)

    @property
    def agent(self) -> ActorState:
        return self.actors[0]


def _priority_key(actor: ActorState, idx: int):
    return (actor.waited, -APPROACH_ORDINAL[actor.route], -actor.lane, -idx)


def _is_waiting(actor: ActorState) -> bool:
    # stalled vehicles never hold right-of-way: a breakdown at the line
    # must not lock the intersection
    return (actor.policy is not Policy.STOPPED
            and actor.has_stopped_in_stop_region
            and not actor.has_entered_intersection)


def refresh_zone_state(env: RoadEnvironment, actor: ActorState) -> None:
    """Recompute zone membership and monotone flags from geometry."""
    veh = actor.vehicle
    x = veh.p_x
    lo = x - REAR_OVERHANG_
    hi = x + FRONT_EXTENT
    in_stop = lo < env.stop_region_end and env.stop_region_start < hi
    in_box = lo < env.intersection_end and env.intersection_start < hi
    actor.in_stop_region = in_stop
    actor.in_intersection = in_box
    actor.lane = 0 if veh.p_y < 0.0 else 1
    if in_stop:
        actor.has_entered_stop_region = True
        if veh.v < STOPPED_SPEED:
            actor.has_stopped_in_stop_region = True
    if in_box:
        actor.has_entered_intersection = True


def intersection_is_clear(w: WorldState, actor_idx: int) -> bool:
    for j, other in enumerate(w.actors):
        if j != actor_idx and other.in_intersection:
            return False
    return True


def higher_priority(w: WorldState, actor_idx: int) -> bool:
    """Whether it is this actor's turn at the all-way stop.

    The crossing grant is sticky: the holder keeps priority until it has
    passed through the box. With no grant outstanding, the actor must
    outrank every waiting vehicle (longest wait first, ties by approach
    order, then lane, then roster index).
    """
    if w.granted == actor_idx:
        return True
    if w.granted >= 0:
        return False
    mine = _priority_key(w.actors[actor_idx], actor_idx)
    for j, other in enumerate(w.actors):
        if j == actor_idx or not _is_waiting(other):
            continue
        if _priority_key(other, j) >= mine:
            return False
    return True


LAUNCH_ACCEL = 2.0


def reference_speed_for(w: WorldState, actor_idx: int) -> float:
    """Reference speed over the whole maneuver: the approach ramp into the
    stop, zero while holding at the line, and a launch ramp out of it."""
    actor = w.actors[actor_idx]
    env = w.env
    if not actor.has_stopped_in_stop_region:
        return env.reference_speed(actor.vehicle.p_x, False)
    if not actor.has_entered_intersection and not (
            intersection_is_clear(w, actor_idx) and higher_priority(w, actor_idx)):
        return 0.0
    gone = actor.vehicle.p_x - env.stop_target
    if gone <= 0.0:
        return 0.0
    return min(env.speed_limit, math.sqrt(2.0 * LAUNCH_ACCEL * gone))


def label_bitmask(w: WorldState, actor_idx: int) -> int:
    """Truth set packed into bits following AP_ORDER."""
    actor = w.actors[actor_idx]
    mask = 0
    if actor.in_stop_region:
        mask |= 8  # in_stop_region
    else:
        mask |= 1  # not_in_stop_region
    if actor.has_entered_stop_region:
        mask |= 2
    if actor.has_stopped_in_stop_region:
        mask |= 4
    if actor.in_intersection:
        mask |= 16
    if actor.vehicle.v > w.env.speed_limit:
        mask |= 32
    if abs(actor.vehicle.p_y) <= w.env.road_half_width:
        mask |= 64
    if intersection_is_clear(w, actor_idx):
        mask |= 128
    if higher_priority(w, actor_idx):
        mask |= 256
    return mask


def label_from_bits(mask: int) -> frozenset[str]:
    return frozenset(name for i, name in enumerate(AP_ORDER) if mask >> i & 1)


def label(w: WorldState, actor_idx: int) -> frozenset[str]:
    """Truth set over the atomic propositions for one actor."""
    return label_from_bits(label_bitmask(w, actor_idx))


def _update_grant(w: WorldState) -> None:
    if w.granted >= 0:
        holder = w.actors[w.granted]
        if holder.has_entered_intersection and not holder.in_intersection:
            w.granted = -1
    if w.granted < 0:
        best = -1
        best_key = None
        for j, actor in enumerate(w.actors):
            if _is_waiting(actor):
                key = _priority_key(actor, j)
                if best_key is None or key > best_key:
                    best, best_key = j, key
        w.granted = best


