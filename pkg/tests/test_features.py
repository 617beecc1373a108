import math
import random

import pytest
from hypothesis import given, strategies as st

from ltlplan.features import (
    DEFAULT_WEIGHTS,
    N_FEATURES,
    RewardWeights,
    ZERO_RESPONSE,
    features,
    step_cost,
    terminal_reward,
)
from ltlplan.sim import (
    ActorState,
    Policy,
    RoadEnvironment,
    Status,
    VehicleState,
    WorldState,
    refresh_zone_state,
    spawn_scenario,
)

ENV = RoadEnvironment()


def make_world(*actors):
    w = WorldState(ENV, list(actors))
    for a in w.actors:
        refresh_zone_state(ENV, a)
    return w


def actor(x, lane=0, v=0.0, route=0, policy=Policy.SCRIPTED):
    return ActorState(VehicleState(p_x=x, p_y=ENV.lane_center(lane), v=v),
                      route=route, lane=lane, policy=policy)


def test_agent_alone_has_zero_response_slots():
    w = make_world(actor(10.0, v=8.0, policy=Policy.PLANNER))
    f = features(w, 0)
    assert len(f) == N_FEATURES
    slots = f[18:]
    for k in range(6):
        assert tuple(slots[k * 13:(k + 1) * 13]) == ZERO_RESPONSE


def test_perfect_tracking_has_zero_errors():
    a = actor(70.0, v=ENV.speed_limit, policy=Policy.PLANNER)
    a.has_stopped_in_stop_region = True  # past both stop and launch ramps
    w = make_world(a)
    f = features(w, 0)
    v, v_ref, e_y, theta, lane_offset = f[0], f[1], f[2], f[5], f[7]
    assert v == v_ref
    assert e_y == ENV.lane_center(0)  # offset from the road centerline
    assert lane_offset == 0.0
    assert theta == 0.0


def test_leader_ahead_fills_ahead_slot():
    w = make_world(actor(10.0, v=5.0, policy=Policy.PLANNER), actor(20.0, v=5.0))
    f = features(w, 0)
    ahead = f[18:31]
    assert ahead[0] == -10.0  # ego minus neighbor position
    assert ahead[1] == 0.0
    assert ahead[2] == 5.0
    for k in range(1, 6):
        assert tuple(f[18 + k * 13:18 + (k + 1) * 13]) == ZERO_RESPONSE


def test_feature_length_constant_across_worlds():
    for seed in range(5):
        w = spawn_scenario(seed=seed, n_vehicles=seed % 6, stopped_car=bool(seed % 2))
        assert len(features(w, 0)) == N_FEATURES


def test_horizon_saturation_is_exact():
    near = make_world(actor(10.0, policy=Policy.PLANNER), actor(59.0))
    far = make_world(actor(10.0, policy=Policy.PLANNER), actor(61.0))
    ahead_near = tuple(features(near, 0)[18:31])
    ahead_far = tuple(features(far, 0)[18:31])
    assert ahead_near != ZERO_RESPONSE
    assert ahead_far == ZERO_RESPONSE


def test_features_invariant_under_actor_relabeling():
    base = [actor(30.0, lane=1, v=4.0), actor(55.0, v=2.0),
            actor(20.0, route=1, v=6.0), actor(70.0, route=1, lane=1, v=8.0)]
    me = actor(10.0, v=7.0, policy=Policy.PLANNER)
    w1 = make_world(me, *base)
    ref = features(w1, 0)
    rng = random.Random(4)
    for _ in range(5):
        shuffled = base[:]
        rng.shuffle(shuffled)
        w2 = make_world(me.clone(), *[a.clone() for a in shuffled])
        assert features(w2, 0) == ref


def test_cross_traffic_lands_in_cross_slots():
    # northbound actor south of the box: to the right of an eastbound agent
    w = make_world(actor(20.0, policy=Policy.PLANNER), actor(20.0, route=1))
    f = features(w, 0)
    cross_left = tuple(f[18 + 4 * 13:18 + 5 * 13])
    cross_right = tuple(f[18 + 5 * 13:18 + 6 * 13])
    assert cross_left == ZERO_RESPONSE
    assert cross_right != ZERO_RESPONSE


def test_step_cost_zero_only_for_perfect_tracking():
    w = make_world(actor(70.0, v=ENV.speed_limit, policy=Policy.PLANNER))
    w.actors[0].has_stopped_in_stop_region = True
    assert step_cost(w, (0.0, 0.0), (0.0, 0.0)) == 0.0


def test_step_cost_identity_weight_unit_residual():
    weights = RewardWeights(e_y=1, e_theta=1, speed=1, overspeed=1,
                            accel=1, jerk=1, steer_rate=1)
    a = actor(70.0, v=ENV.speed_limit, policy=Policy.PLANNER)
    a.has_stopped_in_stop_region = True
    a.vehicle.p_y = ENV.lane_center(0) + 1.0  # one meter off the lane center
    w = make_world(a)
    w.actors[0].lane = 0
    assert step_cost(w, (0.0, 0.0), (0.0, 0.0), weights) == -1.0


def test_overspeed_costs_more_than_underspeed():
    fast = actor(70.0, v=ENV.speed_limit + 2, policy=Policy.PLANNER)
    slow = actor(70.0, v=ENV.speed_limit - 2, policy=Policy.PLANNER)
    fast.has_stopped_in_stop_region = slow.has_stopped_in_stop_region = True
    cost_fast = step_cost(make_world(fast), (0.0, 0.0), (0.0, 0.0))
    cost_slow = step_cost(make_world(slow), (0.0, 0.0), (0.0, 0.0))
    assert cost_fast < cost_slow < 0.0


@given(st.floats(0, 11.18), st.floats(-2, 2), st.floats(-1, 1), st.floats(-2, 2))
def test_step_cost_is_never_positive(v, a, psi_dot, prev_a):
    w = make_world(actor(25.0, v=v, policy=Policy.PLANNER))
    assert step_cost(w, (a, psi_dot), (prev_a, 0.0)) <= 0.0


def test_terminal_collision_penalty():
    assert terminal_reward(Status.COLLIDED, set()) == -200.0


def test_terminal_goal_rewards_are_additive():
    assert terminal_reward(Status.GOAL_REACHED,
                           {"stopped_at_sign", "exited_region"}) == 400.0


def test_terminal_timeout_keeps_earned_goals():
    assert terminal_reward(Status.TIMEOUT, {"stopped_at_sign"}) == 200.0


def test_terminal_requires_terminal_status():
    with pytest.raises(ValueError):
        terminal_reward(Status.RUNNING, set())


def test_reward_weights_reject_negative():
    with pytest.raises(ValueError):
        RewardWeights(e_y=-0.1)


def test_reward_weights_from_scenario_dict():
    w = RewardWeights.from_dict({"e_y": 2.0, "jerk": 0.0})
    assert w.e_y == 2.0 and w.jerk == 0.0 and w.speed == DEFAULT_WEIGHTS.speed
