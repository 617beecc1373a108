"""Feature vector and reward terms.

The feature vector concatenates the ego block (10 continuous entries),
the ego predicate block (8 indicators), and six geometric neighbor
slots (ahead, behind, other-lane ahead/behind, crossing traffic left/
right), each holding 5 continuous entries plus the neighbor's 8
predicate indicators: 10 + 8 + 6 * 13 = 96 entries total, independent
of how many actors exist. Absent or beyond-horizon neighbors take a
fixed zero-response encoding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .sim.road import RoadEnvironment, WHEEL_BASE
from .sim.world import (
    ActorState,
    Status,
    WorldState,
    higher_priority,
    intersection_is_clear,
    reference_speed_for,
)

HORIZON = 50.0
N_FEATURES = 96
EGO_BLOCK = 10
PREDICATE_BLOCK = 8
SLOT_BLOCK = 5 + PREDICATE_BLOCK
SLOT_NAMES = ("ahead", "behind", "other_ahead", "other_behind",
              "cross_left", "cross_right")
ZERO_RESPONSE = (HORIZON, 0.0, 0.0, 0.0, 0.0) + (0.0,) * PREDICATE_BLOCK

EPISODE_GOALS = ("stopped_at_sign", "exited_region")
GOAL_REWARD = 200.0
FAILURE_PENALTY = -200.0


@dataclass(frozen=True)
class RewardWeights:
    """Diagonal weights over (e_y, e_theta, speed error, overspeed excess,
    accel, jerk, steer rate)."""

    e_y: float = 1.0
    e_theta: float = 0.5
    speed: float = 0.1
    overspeed: float = 0.4
    accel: float = 0.1
    jerk: float = 0.05
    steer_rate: float = 0.1

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if value < 0:
                raise ValueError(f"reward weight {name} must be nonnegative")

    @classmethod
    def from_dict(cls, raw: dict) -> "RewardWeights":
        return cls(**raw)


def _predicate_block(w: WorldState, idx: int) -> tuple:
    actor = w.actors[idx]
    return (
        0.0 if actor.in_stop_region else 1.0,
        1.0 if actor.has_entered_stop_region else 0.0,
        1.0 if actor.has_stopped_in_stop_region else 0.0,
        1.0 if actor.in_intersection else 0.0,
        1.0 if actor.vehicle.v > w.env.speed_limit else 0.0,
        1.0 if abs(actor.vehicle.p_y) <= w.env.road_half_width else 0.0,
        1.0 if intersection_is_clear(w, idx) else 0.0,
        1.0 if higher_priority(w, idx) else 0.0,
    )


def _into_frame(env: RoadEnvironment, route: int, other: ActorState) -> tuple[float, float]:
    """Other actor's rear-axle position expressed in `route`'s frame."""
    if other.route == route:
        return other.vehicle.p_x, other.vehicle.p_y
    wx, wy = env.to_world(other.route, other.vehicle.p_x, other.vehicle.p_y)
    if route == 0:
        return wx + env.center, wy
    return wy + env.center, -wx


def features(w: WorldState, actor_idx: int) -> list[float]:
    """96-entry feature vector for one actor; length is world-independent."""
    env = w.env
    me = w.actors[actor_idx]
    veh = me.vehicle
    x, y = veh.p_x, veh.p_y
    lane_offset = y - env.lane_center(me.lane)
    v_ref = reference_speed_for(w, actor_idx)

    out = [
        veh.v, v_ref, y, veh.psi,
        veh.v * math.tan(veh.psi) / WHEEL_BASE,
        veh.theta, float(me.lane), lane_offset, veh.a, veh.psi_dot,
    ]
    out.extend(_predicate_block(w, actor_idx))

    slots: dict[str, tuple[float, int]] = {}

    def offer(slot: str, dist: float, j: int) -> None:
        cur = slots.get(slot)
        if cur is None or dist < cur[0]:
            slots[slot] = (dist, j)

    for j, other in enumerate(w.actors):
        if j == actor_idx:
            continue
        ox, oy = _into_frame(env, me.route, other)
        dx, dy = ox - x, oy - y
        dist = math.hypot(dx, dy)
        if dist > HORIZON:
            continue
        if other.route == me.route:
            if other.lane == me.lane:
                offer("ahead" if dx > 0 else "behind", abs(dx), j)
            else:
                offer("other_ahead" if dx > 0 else "other_behind", abs(dx), j)
        else:
            offer("cross_left" if dy > 0 else "cross_right", dist, j)

    for slot in SLOT_NAMES:
        hit = slots.get(slot)
        if hit is None:
            out.extend(ZERO_RESPONSE)
            continue
        j = hit[1]
        other = w.actors[j]
        ox, oy = _into_frame(env, me.route, other)
        out.append(x - ox)
        out.append(y - oy)
        out.append(other.vehicle.v)
        out.append(other.vehicle.a)
        out.append(other.waited)
        out.extend(_predicate_block(w, j))
    return out


def step_cost(w: WorldState, u: tuple[float, float],
              prev_u: tuple[float, float],
              weights: RewardWeights | None = None) -> float:
    """Negative weighted squared residual; zero only for perfect tracking."""
    weights = weights or DEFAULT_WEIGHTS
    env = w.env
    me = w.actors[0]
    veh = me.vehicle
    e_y = veh.p_y - env.lane_center(me.lane)
    e_theta = veh.theta
    v_ref = reference_speed_for(w, 0)
    speed_err = veh.v - v_ref
    overspeed = min(0.0, v_ref - veh.v)
    a, psi_dot = u
    jerk = (a - prev_u[0]) / env.dt
    cost = (weights.e_y * e_y * e_y
            + weights.e_theta * e_theta * e_theta
            + weights.speed * speed_err * speed_err
            + weights.overspeed * overspeed * overspeed
            + weights.accel * a * a
            + weights.jerk * jerk * jerk
            + weights.steer_rate * psi_dot * psi_dot)
    return -cost


def terminal_reward(status: Status, achieved_goals: frozenset[str] | set[str]) -> float:
    """Terminal component: failure penalty plus per-goal bonuses."""
    if status is Status.RUNNING:
        raise ValueError("terminal_reward requires a terminal status")
    total = 0.0
    if status in (Status.COLLIDED, Status.CONSTRAINT_VIOLATED):
        total += FAILURE_PENALTY
    total += GOAL_REWARD * len(set(achieved_goals) & set(EPISODE_GOALS))
    return total


DEFAULT_WEIGHTS = RewardWeights()
