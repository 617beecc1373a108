import math

import pytest
from hypothesis import given, strategies as st

from ltlplan.sim import (
    PSI_MAX,
    WHEEL_BASE,
    VehicleState,
    footprint_corners,
    rectangles_overlap,
    step_vehicle,
)


def test_straight_coast_advances_position_only():
    x = VehicleState(p_x=0, p_y=0, theta=0, v=10, psi=0)
    out = step_vehicle(x, (0.0, 0.0), 0.1)
    assert (out.p_x, out.p_y, out.theta, out.v, out.psi) == (1.0, 0.0, 0.0, 10.0, 0.0)


def test_acceleration_integrates_into_speed():
    x = VehicleState(p_x=0, p_y=0, theta=0, v=10, psi=0)
    out = step_vehicle(x, (1.0, 0.0), 0.1)
    assert (out.p_x, out.v) == (1.0, 10.1)


def test_stationary_vehicle_is_a_fixed_point():
    x = VehicleState()
    out = step_vehicle(x, (0.0, 0.0), 0.1)
    assert (out.p_x, out.p_y, out.theta, out.v, out.psi) == (0, 0, 0, 0, 0)


def test_speed_clamped_nonnegative():
    x = VehicleState(v=0.05)
    out = step_vehicle(x, (-2.0, 0.0), 0.1)
    assert out.v == 0.0


def test_steering_angle_clamped():
    x = VehicleState(v=1.0, psi=PSI_MAX)
    out = step_vehicle(x, (0.0, 1.0), 0.1)
    assert out.psi == PSI_MAX


def test_out_of_range_control_is_clamped():
    x = VehicleState(v=5.0)
    out = step_vehicle(x, (99.0, -99.0), 0.1)
    assert out.a == 2.0
    assert out.psi_dot == -1.0


def test_rejects_nonpositive_dt():
    with pytest.raises(ValueError):
        step_vehicle(VehicleState(), (0.0, 0.0), 0.0)


@given(st.floats(0, 11.18), st.floats(-2, 2), st.floats(-1, 1))
def test_step_outputs_stay_finite(v, a, psi_dot):
    x = VehicleState(v=v, psi=0.2)
    out = step_vehicle(x, (a, psi_dot), 0.1)
    for value in (out.p_x, out.p_y, out.theta, out.v, out.psi):
        assert math.isfinite(value)
    assert out.v >= 0.0
    assert abs(out.psi) <= PSI_MAX


def simulate_constant(v, psi, dt, total_time):
    x = VehicleState(v=v, psi=psi)
    points = [(x.p_x, x.p_y)]
    steps = int(round(total_time / dt))
    for _ in range(steps):
        x = step_vehicle(x, (0.0, 0.0), dt)
        points.append((x.p_x, x.p_y))
    return points, x


def test_constant_steering_traces_the_analytic_circle():
    v, psi, dt = 5.0, 0.3, 0.001
    radius = WHEEL_BASE / math.tan(psi)
    quarter_turn_time = (math.pi / 2) * radius / v
    points, _ = simulate_constant(v, psi, dt, quarter_turn_time)
    center = (0.0, radius)
    for px, py in points:
        r = math.hypot(px - center[0], py - center[1])
        assert abs(r - radius) / radius < 0.01


def test_euler_error_halves_with_dt():
    def trajectory(dt, total=2.0):
        x = VehicleState(v=8.0)
        out = {0.0: (0.0, 0.0)}
        steps = int(round(total / dt))
        for k in range(steps):
            x = step_vehicle(x, (0.5, 0.2), dt)
            out[round((k + 1) * dt, 6)] = (x.p_x, x.p_y)
        return out

    reference = trajectory(1e-4)

    def max_error(dt):
        traj = trajectory(dt)
        worst = 0.0
        for t, (px, py) in traj.items():
            rx, ry = reference[t]
            worst = max(worst, math.hypot(px - rx, py - ry))
        return worst

    e1 = max_error(0.04)
    e2 = max_error(0.02)
    ratio = e1 / e2
    assert 1.7 < ratio < 2.3  # first-order convergence


def test_rectangles_overlap_detects_touching_cars():
    a = footprint_corners(0.0, 0.0, 0.0)
    b = footprint_corners(4.0, 0.0, 0.0)  # nose-to-tail with overlap
    c = footprint_corners(0.0, 2.5, 0.0)  # one lane over
    assert rectangles_overlap(a, b)
    assert not rectangles_overlap(a, c)


def test_rotated_rectangles_overlap():
    a = footprint_corners(0.0, 0.0, 0.0)
    b = footprint_corners(3.0, 1.2, math.pi / 2)
    assert rectangles_overlap(a, b)
