import pytest

from ltlplan.ltl import TRUE, parse
from ltlplan.options import (
    InapplicableOption,
    LANE_CHANGE_DISTANCE,
    OPTIONS,
    OPTION_ORDER,
    begin_option,
    build_options,
    option_constraint,
    option_control,
    option_goal_achieved,
    option_terminated,
)
from ltlplan.sim import (
    ALPHABET,
    ActorState,
    Policy,
    RoadEnvironment,
    Status,
    VehicleState,
    WorldState,
    advance_world,
    higher_priority,
    refresh_zone_state,
    spawn_scenario,
)

ENV = RoadEnvironment()


def make_world(*actors):
    w = WorldState(ENV, list(actors))
    for a in w.actors:
        refresh_zone_state(ENV, a)
    return w


def agent(x, lane=0, v=0.0, **flags):
    a = ActorState(VehicleState(p_x=x, p_y=ENV.lane_center(lane), v=v),
                   route=0, lane=lane, policy=Policy.PLANNER)
    for key, value in flags.items():
        setattr(a, key, value)
    return a


def scripted(x, lane=0, v=0.0, route=0):
    return ActorState(VehicleState(p_x=x, p_y=ENV.lane_center(lane), v=v),
                      route=route, lane=lane, policy=Policy.SCRIPTED)


def run_option(w, name, max_steps=400, settings=None):
    options = build_options(settings)
    ctx = begin_option(options[name], w)
    elapsed = 0.0
    steps = 0
    while steps < max_steps and not option_terminated(ctx, w, elapsed):
        w = advance_world(w, option_control(ctx, w), ENV.dt)
        elapsed += ENV.dt
        steps += 1
    return w, ctx, elapsed


def test_option_set_matches_the_paper_roster():
    assert OPTION_ORDER == ("Default", "Follow", "Pass", "Stop",
                            "Wait", "Left", "Right", "Finish")
    assert [OPTIONS[n].letter for n in OPTION_ORDER] == \
        ["D", "F", "P", "S", "W", "L", "R", "C"]


def test_default_is_quiet_at_equilibrium():
    a = agent(60.0, v=ENV.speed_limit, has_stopped_in_stop_region=True)
    w = make_world(a)
    ctx = begin_option(OPTIONS["Default"], w)
    accel, psi_dot = option_control(ctx, w)
    assert abs(accel) < 1e-9
    assert abs(psi_dot) < 1e-9


def test_wait_holds_still_without_priority():
    me = agent(ENV.stop_target, v=0.0, has_stopped_in_stop_region=True)
    rival = scripted(ENV.stop_target, route=1)
    rival.has_stopped_in_stop_region = True
    rival.waited = 9.0
    w = make_world(me, rival)
    w = advance_world(w, (0.0, 0.0), ENV.dt)  # rival takes the grant
    assert not higher_priority(w, 0)
    ctx = begin_option(OPTIONS["Wait"], w)
    accel, _ = option_control(ctx, w)
    assert accel == 0.0


def test_wait_never_accelerates_without_priority():
    for seed in range(30):
        w = spawn_scenario(seed=seed, n_vehicles=seed % 6, stopped_car=False)
        ctx = begin_option(OPTIONS["Wait"], w)
        for _ in range(40):
            if w.status is not Status.RUNNING:
                break
            accel, _ = option_control(ctx, w)
            if not higher_priority(w, 0):
                assert accel <= 0.0
            w = advance_world(w, (accel, 0.0), ENV.dt)


def test_wait_crosses_once_granted():
    me = agent(ENV.stop_target, v=0.0, has_stopped_in_stop_region=True)
    me.waited = 1.0
    w = make_world(me)
    w, ctx, elapsed = run_option(w, "Wait", settings={"max_duration": 30.0})
    assert w.actors[0].has_entered_intersection
    assert not w.actors[0].in_intersection
    assert option_goal_achieved(ctx, w)


@pytest.mark.parametrize("v", [3.0, 5.0, 7.0, 9.0, 11.18])
@pytest.mark.parametrize("name,start_lane", [("Left", 0), ("Right", 1)])
def test_lane_change_completes_within_21_meters(v, name, start_lane):
    w = make_world(agent(55.0, lane=start_lane, v=v,
                         has_stopped_in_stop_region=True,
                         has_entered_intersection=True))
    start_x = w.actors[0].vehicle.p_x
    w, ctx, elapsed = run_option(w, name, settings={"max_duration": 30.0})
    me = w.actors[0]
    assert abs(me.vehicle.p_y - ENV.lane_center(ctx.target_lane)) <= 0.3
    travelled = me.vehicle.p_x - start_x
    assert travelled <= LANE_CHANGE_DISTANCE, f"{name} at {v} m/s used {travelled:.1f} m"
    assert option_goal_achieved(ctx, w)


@pytest.mark.parametrize("v", [2.0, 5.0, 8.0, 11.18])
def test_stop_halts_inside_region_from_thirty_meters(v):
    start_x = ENV.stop_region_start - 30.0 - 3.6  # front bumper 30 m out
    w = make_world(agent(start_x, v=v))
    w, ctx, elapsed = run_option(w, "Stop", settings={"max_duration": 40.0})
    me = w.actors[0]
    assert me.vehicle.v < 0.1
    assert me.in_stop_region
    assert me.vehicle.p_x + 3.6 <= ENV.stop_region_end + 1e-6
    assert me.has_stopped_in_stop_region
    assert option_goal_achieved(ctx, w)


def test_stop_brake_never_exceeds_limit():
    start_x = ENV.stop_region_start - 30.0 - 3.6
    w = make_world(agent(start_x, v=11.18))
    options = build_options({"max_duration": 40.0})
    ctx = begin_option(options["Stop"], w)
    elapsed = 0.0
    while not option_terminated(ctx, w, elapsed):
        accel, _ = option_control(ctx, w)
        assert accel >= -2.0
        w = advance_world(w, (accel, 0.0), ENV.dt)
        elapsed += ENV.dt


def test_pass_overtakes_a_stopped_car():
    me = agent(20.0, v=8.0)
    blocker = scripted(40.0)
    blocker.policy = Policy.STOPPED
    w = make_world(me, blocker)
    w, ctx, elapsed = run_option(w, "Pass", settings={"max_duration": 30.0})
    assert w.status is Status.RUNNING
    assert w.actors[0].vehicle.p_x > blocker.vehicle.p_x
    assert w.actors[0].lane == ctx.start_lane


def test_follow_requires_a_leader():
    w = make_world(agent(10.0, v=5.0))
    assert not OPTIONS["Follow"].applicable(w)
    with pytest.raises(InapplicableOption):
        begin_option(OPTIONS["Follow"], w)


def test_left_from_left_lane_is_inapplicable():
    w = make_world(agent(10.0, lane=1, v=5.0))
    with pytest.raises(InapplicableOption):
        begin_option(OPTIONS["Left"], w)


def test_stop_after_stopping_is_inapplicable():
    w = make_world(agent(20.0, v=5.0, has_stopped_in_stop_region=True))
    with pytest.raises(InapplicableOption):
        begin_option(OPTIONS["Stop"], w)


def test_option_timeout_terminates():
    w = make_world(agent(10.0, v=5.0))
    ctx = begin_option(OPTIONS["Default"], w)
    assert not option_terminated(ctx, w, 4.9)
    assert option_terminated(ctx, w, 5.0)


def test_terminal_world_terminates_any_option():
    w = make_world(agent(10.0, v=5.0))
    ctx = begin_option(OPTIONS["Default"], w)
    w.status = Status.COLLIDED
    assert option_terminated(ctx, w, 0.0)


def test_option_constraints():
    assert option_constraint(OPTIONS["Default"]) == TRUE
    assert option_constraint(OPTIONS["Wait"]) == parse(
        "G (has_stopped_in_stop_region -> (in_stop_region | in_intersection))",
        ALPHABET)
    assert option_constraint(OPTIONS["Stop"]) == parse("F in_stop_region", ALPHABET)


def test_controls_stay_in_the_declared_box():
    checked = 0
    for seed in range(25):
        w = spawn_scenario(seed=seed, n_vehicles=seed % 6, stopped_car=bool(seed % 2))
        for name in OPTION_ORDER:
            spec = OPTIONS[name]
            if not spec.applicable(w):
                continue
            ctx = begin_option(spec, w)
            sim = w.clone()
            for _ in range(25):
                if sim.status is not Status.RUNNING:
                    break
                accel, psi_dot = option_control(ctx, sim)
                assert -2.0 <= accel <= 2.0
                assert -1.0 <= psi_dot <= 1.0
                checked += 1
                sim = advance_world(sim, (accel, psi_dot), ENV.dt)
    assert checked > 2000
