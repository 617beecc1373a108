"""World stepping: control dispatch, integration, flags, grant, collisions."""

from __future__ import annotations

from .scripted import scripted_actor_control
from .vehicle import (
    clamp_control,
    footprint_corners,
    rectangles_overlap,
    step_vehicle_inplace,
)
from .world import Policy, Status, WorldState, _update_grant, refresh_zone_state

_COLLISION_WINDOW = 9.0  # cross-route pairs can only touch near the box


def step_world_inplace(w: WorldState, planner_control: tuple[float, float],
                       dt: float) -> None:
    """Advance an owned world by one step. Caller guarantees RUNNING status."""
    env = w.env
    actors = w.actors
    controls = []
    for i, actor in enumerate(actors):
        if actor.policy == Policy.PLANNER:
            controls.append(clamp_control(*planner_control))
        elif actor.policy == Policy.STOPPED:
            controls.append((0.0, 0.0))
        else:
            controls.append(scripted_actor_control(w, i))

    for actor, (a, psi_dot) in zip(actors, controls):
        step_vehicle_inplace(actor.vehicle, a, psi_dot, dt)
        refresh_zone_state(env, actor)
        if actor.has_stopped_in_stop_region and not actor.has_entered_intersection:
            actor.waited += dt

    _update_grant(w)

    n = len(actors)
    if n > 1 and _any_collision(env, actors, n):
        w.status = Status.COLLIDED
        w.time += dt
        return

    if actors[0].vehicle.p_x >= env.segment_length:
        w.status = Status.GOAL_REACHED
    w.time += dt


def _corners_world(env, actor):
    veh = actor.vehicle
    wx, wy = env.to_world(actor.route, veh.p_x, veh.p_y)
    return footprint_corners(wx, wy, env.world_heading(actor.route, veh.theta))


def _any_collision(env, actors, n) -> bool:
    center = env.center
    window = _COLLISION_WINDOW
    corners = [None] * n
    for i in range(n):
        ai = actors[i]
        xi = ai.vehicle.p_x
        for j in range(i + 1, n):
            aj = actors[j]
            xj = aj.vehicle.p_x
            if ai.route == aj.route:
                if abs(xi - xj) > 6.0:
                    continue
            elif abs(xi - center) > window or abs(xj - center) > window:
                continue
            if corners[i] is None:
                corners[i] = _corners_world(env, ai)
            if corners[j] is None:
                corners[j] = _corners_world(env, aj)
            if rectangles_overlap(corners[i], corners[j]):
                return True
    return False


def advance_world(w: WorldState, planner_control: tuple[float, float],
                  dt: float) -> WorldState:
    """Pure step: applies the planner control to actor 0, scripted policies
    to the rest, integrates, updates discrete state, and runs collision
    detection."""
    if w.status is not Status.RUNNING:
        raise RuntimeError(f"advance_world on a {w.status.value} world")
    out = w.clone()
    step_world_inplace(out, planner_control, dt)
    return out
