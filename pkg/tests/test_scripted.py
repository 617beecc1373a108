from ltlplan.sim import (
    ActorState,
    Policy,
    RoadEnvironment,
    Status,
    VehicleState,
    VEHICLE_LENGTH,
    WorldState,
    advance_world,
    refresh_zone_state,
    scripted_actor_control,
    spawn_scenario,
)

ENV = RoadEnvironment()


def make_world(*actors):
    w = WorldState(ENV, list(actors))
    for a in w.actors:
        refresh_zone_state(ENV, a)
    return w


def scripted(x, lane=0, v=0.0, route=0, **flags):
    a = ActorState(VehicleState(p_x=x, p_y=ENV.lane_center(lane), v=v),
                   route=route, lane=lane, policy=Policy.SCRIPTED)
    for key, value in flags.items():
        setattr(a, key, value)
    return a


def test_clear_road_uses_preferred_acceleration():
    w = make_world(scripted(5.0, v=5.0))
    a, psi_dot = scripted_actor_control(w, 0)
    assert a == 1.0
    assert abs(psi_dot) < 1e-9


def test_follow_gap_equilibrium():
    # past the intersection, so no stop-sign braking interferes
    me = scripted(55.0, v=8.0, has_stopped_in_stop_region=True,
                  has_entered_intersection=True)
    lead = scripted(55.0 + VEHICLE_LENGTH + 6.0, v=8.0,
                    has_stopped_in_stop_region=True, has_entered_intersection=True)
    w = make_world(me, lead)
    a, _ = scripted_actor_control(w, 0)
    assert abs(a) < 1e-9


def test_closing_on_slow_leader_brakes():
    me = scripted(50.0, v=11.0, has_stopped_in_stop_region=True,
                  has_entered_intersection=True)
    lead = scripted(50.0 + VEHICLE_LENGTH + 8.0, v=0.0,
                    has_stopped_in_stop_region=True, has_entered_intersection=True)
    w = make_world(me, lead)
    a, _ = scripted_actor_control(w, 0)
    assert a < -1.0


def test_waits_while_intersection_occupied():
    me = scripted(ENV.stop_target, v=0.0, has_stopped_in_stop_region=True)
    crossing = scripted(ENV.center, route=1, v=5.0)
    w = make_world(me, crossing)
    a, _ = scripted_actor_control(w, 0)
    assert a == 0.0


def test_proceeds_once_clear_and_granted():
    me = scripted(ENV.stop_target, v=0.0, has_stopped_in_stop_region=True)
    me.waited = 2.0
    w = make_world(me)
    w = advance_world(w, (0.0, 0.0), 0.1)  # grant assignment happens in the step
    a, _ = scripted_actor_control(w, 0)
    assert a > 0.5


def test_scripted_actor_stops_at_the_stop_region():
    w = make_world(scripted(5.0, v=11.18))
    me = w.actors[0]
    for _ in range(600):
        if me.has_stopped_in_stop_region:
            break
        w = advance_world(w, (0.0, 0.0), 0.1)
        me = w.actors[0]
    assert me.has_stopped_in_stop_region
    assert me.vehicle.p_x + 3.6 <= ENV.stop_region_end + 0.01  # front inside region


def run_all_scripted(seed, n_vehicles, stopped_car=False, horizon_s=60.0):
    w = spawn_scenario(seed, n_vehicles, stopped_car)
    w.actors[0].policy = Policy.SCRIPTED
    steps = int(horizon_s / ENV.dt)
    for _ in range(steps):
        if w.status is not Status.RUNNING:
            break
        w = advance_world(w, (0.0, 0.0), ENV.dt)
    return w


def test_scripted_only_episodes_are_collision_free():
    for seed in range(1, 13):
        w = run_all_scripted(seed, n_vehicles=5)
        assert w.status is not Status.COLLIDED, f"seed {seed} collided"


def test_scripted_actor_clears_the_intersection_eventually():
    w = run_all_scripted(seed=2, n_vehicles=0, horizon_s=40.0)
    assert w.status is Status.GOAL_REACHED
