"""Aggressive scripted driving policy for non-planner actors.

Far from any event they chase the speed limit at a preferred 1.0 m/s^2.
They hold a 6 m bumper-to-bumper gap behind a leader, stop with the
front bumper at the stop-region midpoint, remain stopped until the
intersection is clear and it is their turn, then accelerate out.
Braking never exceeds 2.0 m/s^2.
"""

from __future__ import annotations

from .control import follow_speed, halt_candidate, steer_toward
from .road import STOPPED_SPEED, VEHICLE_LENGTH
from .world import WorldState, higher_priority, intersection_is_clear

PREFERRED_ACCEL = 1.0
BRAKE_LIMIT = -2.0
LEADER_RANGE = 60.0


def find_leader(w: WorldState, actor_idx: int) -> int:
    """Index of the nearest vehicle ahead in the same lane, or -1."""
    me = w.actors[actor_idx]
    x = me.vehicle.p_x
    best = -1
    best_gap = LEADER_RANGE
    for j, other in enumerate(w.actors):
        if j == actor_idx or other.route != me.route or other.lane != me.lane:
            continue
        ahead = other.vehicle.p_x - x
        if 0.0 < ahead < best_gap:
            best, best_gap = j, ahead
    return best


def scripted_longitudinal(w: WorldState, actor_idx: int) -> float:
    """Unclamped acceleration request for the aggressive policy."""
    env = w.env
    me = w.actors[actor_idx]
    veh = me.vehicle
    x = veh.p_x
    v = veh.v

    accel = env.speed_limit - v  # SPEED_GAIN = 1

    leader_idx = find_leader(w, actor_idx)
    if leader_idx >= 0:
        lead = w.actors[leader_idx].vehicle
        gap = lead.p_x - x - VEHICLE_LENGTH
        cand = follow_speed(lead.v, gap) - v
        if cand < accel:
            accel = cand
        if v > lead.v + 0.3:
            # emergency backstop: stay able to halt 1.5 m short of where the
            # leader would end up if it braked at the limit
            cand = halt_candidate(gap - 1.5 + lead.v * lead.v / 4.0, v)
            if cand < accel:
                accel = cand

    if not me.has_stopped_in_stop_region:
        if x < env.stop_region_end:
            gap = env.stop_target - x
            cand = halt_candidate(gap, v)
            if cand < accel:
                accel = cand
            if v < STOPPED_SPEED and gap < 2.0 and accel > 0.0:
                accel = 0.0
    elif not me.has_entered_intersection:
        if not (intersection_is_clear(w, actor_idx) and higher_priority(w, actor_idx)):
            if -v < accel:
                accel = -v
    return accel


def scripted_actor_control(w: WorldState, actor_idx: int) -> tuple[float, float]:
    me = w.actors[actor_idx]
    veh = me.vehicle
    psi_dot = steer_toward(veh.p_y - w.env.lane_center(me.lane), veh.theta, veh.psi)
    accel = scripted_longitudinal(w, actor_idx)
    return min(max(accel, BRAKE_LIMIT), PREFERRED_ACCEL), psi_dot
