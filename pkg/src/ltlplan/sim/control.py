"""Low-level control primitives shared by scripted actors and options.

Lateral control is a curvature-domain pursuit law: lateral offset and
heading error map to a desired path curvature, an inner loop drives the
steering angle toward it. Working in curvature makes the settling
distance speed-independent, which is what lane-change-within-21-m needs.
Longitudinal control is saturated proportional speed tracking.
"""

from __future__ import annotations

import math

from .road import PSI_DOT_MAX, PSI_DOT_MIN, WHEEL_BASE

HEADING_GAIN = 0.20   # rad per meter of lateral error
HEADING_MAX = 0.30    # rad, crossing angle cap
KAPPA_GAIN = 0.50     # curvature per radian of heading error
KAPPA_MAX = 0.13      # 1/m, caps commanded curvature
STEER_GAIN = 8.0      # 1/s, inner steering loop
SPEED_GAIN = 1.0      # 1/s, proportional speed tracking
FOLLOW_GAP = 6.0      # m, bumper-to-bumper setpoint
FOLLOW_GAIN = 0.25    # 1/s, gap error to speed offset


def steer_toward(lateral_error: float, heading: float, psi: float) -> float:
    """Steering rate driving the vehicle onto the line `lateral_error` = 0.

    Cascade: lateral error -> bounded desired heading -> curvature ->
    steering angle. Bounding the heading keeps the crossing angle gentle
    and makes the settling distance roughly speed-independent.
    """
    heading_des = -HEADING_GAIN * lateral_error
    if heading_des > HEADING_MAX:
        heading_des = HEADING_MAX
    elif heading_des < -HEADING_MAX:
        heading_des = -HEADING_MAX
    kappa = KAPPA_GAIN * (heading_des - heading)
    if kappa > KAPPA_MAX:
        kappa = KAPPA_MAX
    elif kappa < -KAPPA_MAX:
        kappa = -KAPPA_MAX
    rate = STEER_GAIN * (math.atan(WHEEL_BASE * kappa) - psi)
    return min(max(rate, PSI_DOT_MIN), PSI_DOT_MAX)


def track_speed(v: float, v_target: float) -> float:
    return SPEED_GAIN * (v_target - v)


def follow_speed(v_lead: float, gap: float) -> float:
    """Target speed that settles at FOLLOW_GAP behind the leader."""
    return v_lead + FOLLOW_GAIN * (gap - FOLLOW_GAP)


def ramp_speed(distance_to_halt: float, decel: float, v_max: float) -> float:
    """Speed profile that reaches zero exactly at the halt point."""
    if distance_to_halt <= 0.0:
        return 0.0
    return min(v_max, math.sqrt(2.0 * decel * distance_to_halt))


HALT_TRIGGER = 1.2  # m/s^2, start braking once this decel is required


def halt_candidate(distance: float, v: float, trigger: float = HALT_TRIGGER) -> float:
    """Acceleration candidate that halts the vehicle `distance` ahead.

    Commands the exact decel required once it crosses `trigger`, so the
    vehicle brakes late but within limits instead of lagging behind a
    speed ramp. Non-binding (+inf) while braking is not yet needed.
    """
    if distance <= 0.0:
        return -2.0 if v > 0.0 else 0.0
    if v < 0.6 and distance < 2.0:
        return -v  # settle the last stretch
    needed = v * v / (2.0 * distance)
    return -needed if needed >= trigger else math.inf
