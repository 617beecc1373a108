"""Non-slip second-order nonholonomic vehicle model.

State x = (p_x, p_y, theta, v, psi) with controls (a, psi_dot),
integrated by forward Euler at a fixed time step. The last applied
control rides along in the state so features and jerk costs can see it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .road import (
    ACCEL_MAX,
    ACCEL_MIN,
    FRONT_EXTENT,
    PSI_DOT_MAX,
    PSI_DOT_MIN,
    PSI_MAX,
    REAR_OVERHANG,
    VEHICLE_WIDTH,
    WHEEL_BASE,
)

log = logging.getLogger(__name__)

_cos, _sin, _tan = math.cos, math.sin, math.tan


@dataclass(slots=True)
class VehicleState:
    p_x: float = 0.0
    p_y: float = 0.0
    theta: float = 0.0
    v: float = 0.0
    psi: float = 0.0
    a: float = 0.0        # last applied acceleration
    psi_dot: float = 0.0  # last applied steering rate

    def clone(self) -> "VehicleState":
        return VehicleState(self.p_x, self.p_y, self.theta, self.v,
                            self.psi, self.a, self.psi_dot)


def clamp_control(a: float, psi_dot: float) -> tuple[float, float]:
    ca = min(max(a, ACCEL_MIN), ACCEL_MAX)
    cp = min(max(psi_dot, PSI_DOT_MIN), PSI_DOT_MAX)
    if ca != a or cp != psi_dot:
        log.warning("control (%.3f, %.3f) clamped to (%.3f, %.3f)", a, psi_dot, ca, cp)
    return ca, cp


def step_vehicle(x: VehicleState, u: tuple[float, float], dt: float) -> VehicleState:
    """One forward-Euler step; v is clamped nonnegative and psi to its limit."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    a, psi_dot = clamp_control(*u)
    out = x.clone()
    step_vehicle_inplace(out, a, psi_dot, dt)
    return out


def step_vehicle_inplace(x: VehicleState, a: float, psi_dot: float, dt: float) -> None:
    v = x.v
    theta = x.theta
    psi = x.psi
    x.p_x += v * _cos(theta) * dt
    x.p_y += v * _sin(theta) * dt
    x.theta = theta + v * _tan(psi) / WHEEL_BASE * dt
    v += a * dt
    x.v = v if v > 0.0 else 0.0
    psi += psi_dot * dt
    if psi > PSI_MAX:
        psi = PSI_MAX
    elif psi < -PSI_MAX:
        psi = -PSI_MAX
    x.psi = psi
    x.a = a
    x.psi_dot = psi_dot


def footprint_corners(cx: float, cy: float, heading: float) -> tuple:
    """World-frame corners of the footprint for a rear axle at (cx, cy)."""
    cos_h = math.cos(heading)
    sin_h = math.sin(heading)
    # footprint center sits between rear and front bumper
    mid = (FRONT_EXTENT - REAR_OVERHANG) / 2.0
    mx = cx + mid * cos_h
    my = cy + mid * sin_h
    hl = (FRONT_EXTENT + REAR_OVERHANG) / 2.0
    hw = VEHICLE_WIDTH / 2.0
    ax, ay = hl * cos_h, hl * sin_h
    bx, by = -hw * sin_h, hw * cos_h
    return (
        (mx + ax + bx, my + ay + by),
        (mx + ax - bx, my + ay - by),
        (mx - ax - bx, my - ay - by),
        (mx - ax + bx, my - ay + by),
    )


def _project_gap(corners_a, corners_b, axis_x: float, axis_y: float) -> bool:
    min_a = min(cx * axis_x + cy * axis_y for cx, cy in corners_a)
    max_a = max(cx * axis_x + cy * axis_y for cx, cy in corners_a)
    min_b = min(cx * axis_x + cy * axis_y for cx, cy in corners_b)
    max_b = max(cx * axis_x + cy * axis_y for cx, cy in corners_b)
    return max_a < min_b or max_b < min_a


def rectangles_overlap(corners_a, corners_b) -> bool:
    """Separating-axis test for two oriented rectangles."""
    for corners in (corners_a, corners_b):
        for i in (0, 1):
            x1, y1 = corners[i]
            x2, y2 = corners[i + 1]
            if _project_gap(corners_a, corners_b, y2 - y1, x1 - x2):
                return False
    return True
