"""The eight high-level driving options.

Each option couples a scripted low-level controller with a termination
condition, an optional option-local LTL constraint, and a goal predicate
that earns a bonus when achieved during the invocation. Controllers are
pure functions of (context, world); the context captures anchors fixed
at invocation time (start lane, start position, the leader being
passed), which termination distances and goals are measured against.

The controller interface is pluggable: anything mapping (context, world)
to a control tuple can stand in for the scripted laws here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .ltl import Formula, TRUE, parse
from .sim.control import follow_speed, halt_candidate, steer_toward, track_speed
from .sim.road import (
    ACCEL_MAX,
    ACCEL_MIN,
    FRONT_EXTENT,
    STOPPED_SPEED,
    VEHICLE_LENGTH,
)
from .sim.scripted import find_leader
from .sim.world import (
    ALPHABET,
    Status,
    WorldState,
    higher_priority,
    intersection_is_clear,
)

LANE_CHANGE_DISTANCE = 21.0
LANE_SETTLE_OFFSET = 0.3
LANE_SETTLE_HEADING = 0.1
PASS_TRIGGER_RANGE = 30.0
PASS_CLEARANCE = VEHICLE_LENGTH + 6.0
STOP_PLAN_DECEL = 1.9
DEFAULT_MAX_DURATION = 5.0
DEFAULT_GOAL_BONUS = 25.0


class InapplicableOption(ValueError):
    """Raised when an option's applicability precondition fails."""


@dataclass
class OptionContext:
    option: "OptionSpec"
    start_x: float
    start_lane: int
    target_lane: int
    halt_x: float = 0.0
    leader: int = -1
    stopped_at_start: bool = False
    crossed_at_start: bool = False


@dataclass(frozen=True)
class OptionSpec:
    name: str
    letter: str
    controller: Callable[[OptionContext, WorldState], tuple[float, float]]
    terminated: Callable[[OptionContext, WorldState, float], bool]
    applicable: Callable[[WorldState], bool]
    goal: Callable[[OptionContext, WorldState], bool] | None = None
    constraint: Formula = TRUE
    goal_bonus: float = 0.0
    max_duration: float = DEFAULT_MAX_DURATION


def _clamp_agent(a: float, psi_dot: float) -> tuple[float, float]:
    if a > ACCEL_MAX:
        a = ACCEL_MAX
    elif a < ACCEL_MIN:
        a = ACCEL_MIN
    if a != a:  # NaN guard for degenerate geometry
        a = 0.0
    if psi_dot > 1.0:
        psi_dot = 1.0
    elif psi_dot < -1.0:
        psi_dot = -1.0
    return a, psi_dot


def _lane_keep(w: WorldState, ctx: OptionContext) -> float:
    me = w.actors[0]
    target = w.env.lane_center(ctx.target_lane)
    return steer_toward(me.vehicle.p_y - target, me.vehicle.theta, me.vehicle.psi)


def _cruise(w: WorldState, stop_ramp: bool, gap_leader: int = -1,
            yield_hold: bool = False) -> float:
    """Shared longitudinal request: speed-limit chase, optional ramp into
    the mandatory stop, optional hold for a clear intersection and the
    right of way, optional gap-keeping behind one leader."""
    env = w.env
    me = w.actors[0]
    veh = me.vehicle
    accel = track_speed(veh.v, env.speed_limit)
    if stop_ramp and not me.has_stopped_in_stop_region and veh.p_x < env.stop_region_end:
        cand = halt_candidate(env.stop_target - veh.p_x, veh.v)
        if cand < accel:
            accel = cand
        if veh.v < STOPPED_SPEED and env.stop_target - veh.p_x < 2.0 and accel > 0.0:
            accel = 0.0
    if yield_hold and me.has_stopped_in_stop_region \
            and not me.has_entered_intersection \
            and not (intersection_is_clear(w, 0) and higher_priority(w, 0)):
        cand = track_speed(veh.v, 0.0)
        if cand < accel:
            accel = cand
    if gap_leader >= 0:
        lead = w.actors[gap_leader].vehicle
        gap = lead.p_x - veh.p_x - VEHICLE_LENGTH
        cand = track_speed(veh.v, follow_speed(lead.v, gap))
        if cand < accel:
            accel = cand
        if veh.v > lead.v + 0.3:
            cand = halt_candidate(gap - 1.5 + lead.v * lead.v / 4.0, veh.v)
            if cand < accel:
                accel = cand
    return accel


def _never_goal(ctx: OptionContext, w: WorldState) -> bool:
    return False


def _duration_only(ctx: OptionContext, w: WorldState, elapsed: float) -> bool:
    return False


def _always(w: WorldState) -> bool:
    return True


# --- Default -----------------------------------------------------------

def _default_control(ctx, w):
    # tracks the full reference profile: ramp to the stop, hold for the
    # right of way, launch through
    return _clamp_agent(_cruise(w, stop_ramp=True, yield_hold=True),
                        _lane_keep(w, ctx))


# --- Follow ------------------------------------------------------------

def _follow_applicable(w):
    return find_leader(w, 0) >= 0


def _follow_control(ctx, w):
    leader = find_leader(w, 0)  # re-acquired so cut-ins are respected
    return _clamp_agent(_cruise(w, stop_ramp=True, gap_leader=leader,
                                yield_hold=True),
                        _lane_keep(w, ctx))


# --- Pass --------------------------------------------------------------

def _pass_applicable(w):
    me = w.actors[0]
    j = find_leader(w, 0)
    return j >= 0 and w.actors[j].vehicle.p_x - me.vehicle.p_x <= PASS_TRIGGER_RANGE


def _pass_past_leader(ctx, w) -> bool:
    lead = w.actors[ctx.leader]
    return w.actors[0].vehicle.p_x >= lead.vehicle.p_x + PASS_CLEARANCE


def _pass_control(ctx, w):
    me = w.actors[0]
    if _pass_past_leader(ctx, w):
        lane = ctx.start_lane
    else:
        lane = 1 - ctx.start_lane
    steer = steer_toward(me.vehicle.p_y - w.env.lane_center(lane),
                         me.vehicle.theta, me.vehicle.psi)
    gap_leader = ctx.leader if me.lane == ctx.start_lane \
        and not _pass_past_leader(ctx, w) else -1
    return _clamp_agent(_cruise(w, stop_ramp=True, gap_leader=gap_leader), steer)


def _pass_terminated(ctx, w, elapsed):
    me = w.actors[0]
    home = w.env.lane_center(ctx.start_lane)
    return (_pass_past_leader(ctx, w)
            and abs(me.vehicle.p_y - home) <= LANE_SETTLE_OFFSET
            and abs(me.vehicle.theta) <= LANE_SETTLE_HEADING)


# --- Stop --------------------------------------------------------------

def _stop_applicable(w):
    me = w.actors[0]
    return (not me.has_stopped_in_stop_region
            and me.vehicle.p_x < w.env.stop_region_end)


def _stop_control(ctx, w):
    me = w.actors[0]
    veh = me.vehicle
    accel = _cruise(w, stop_ramp=False, gap_leader=find_leader(w, 0))
    cand = halt_candidate(ctx.halt_x - veh.p_x, veh.v, trigger=1.0)
    if cand < accel:
        accel = cand
    if veh.v < STOPPED_SPEED and ctx.halt_x - veh.p_x < 2.0 and accel > 0.0:
        accel = 0.0
    return _clamp_agent(accel, _lane_keep(w, ctx))


def _stop_terminated(ctx, w, elapsed):
    me = w.actors[0]
    return me.in_stop_region and me.vehicle.v < STOPPED_SPEED


def _stop_goal(ctx, w):
    return not ctx.stopped_at_start and w.actors[0].has_stopped_in_stop_region


# --- Wait --------------------------------------------------------------

def _wait_applicable(w):
    me = w.actors[0]
    return not (me.has_entered_intersection and not me.in_intersection)


def _wait_control(ctx, w):
    me = w.actors[0]
    veh = me.vehicle
    if intersection_is_clear(w, 0) and higher_priority(w, 0):
        accel = _cruise(w, stop_ramp=False)
    else:
        accel = track_speed(veh.v, 0.0)  # hold: never positive without priority
    return _clamp_agent(accel, _lane_keep(w, ctx))


def _wait_terminated(ctx, w, elapsed):
    me = w.actors[0]
    return me.has_entered_intersection and not me.in_intersection


def _wait_goal(ctx, w):
    me = w.actors[0]
    return (not ctx.crossed_at_start
            and me.has_entered_intersection and not me.in_intersection)


# --- Left / Right ------------------------------------------------------

def _left_applicable(w):
    return w.actors[0].lane == 0


def _right_applicable(w):
    return w.actors[0].lane == 1


def _lane_change_control(ctx, w):
    return _clamp_agent(_cruise(w, stop_ramp=True), _lane_keep(w, ctx))


def _lane_change_terminated(ctx, w, elapsed):
    me = w.actors[0]
    target = w.env.lane_center(ctx.target_lane)
    return (abs(me.vehicle.p_y - target) <= LANE_SETTLE_OFFSET
            and abs(me.vehicle.theta) <= LANE_SETTLE_HEADING)


def _lane_change_goal(ctx, w):
    return (_lane_change_terminated(ctx, w, 0.0)
            and w.actors[0].vehicle.p_x - ctx.start_x <= LANE_CHANGE_DISTANCE)


# --- Finish ------------------------------------------------------------

def _finish_control(ctx, w):
    return _clamp_agent(_cruise(w, stop_ramp=False), _lane_keep(w, ctx))


def _finish_terminated(ctx, w, elapsed):
    return w.actors[0].vehicle.p_x >= w.env.segment_length


_WAIT_CONSTRAINT = parse(
    "G (has_stopped_in_stop_region -> (in_stop_region | in_intersection))",
    ALPHABET)
_STOP_CONSTRAINT = parse("F in_stop_region", ALPHABET)


def build_options(overrides: dict | None = None) -> dict[str, OptionSpec]:
    """Construct the option set; `overrides` follows the scenario JSON
    "options" block: {"max_duration": s, "goal_bonus": {name: value}}."""
    overrides = overrides or {}
    duration = float(overrides.get("max_duration", DEFAULT_MAX_DURATION))
    bonuses = dict.fromkeys(("Stop", "Wait", "Left", "Right"), DEFAULT_GOAL_BONUS)
    bonuses.update(overrides.get("goal_bonus", {}))

    def bonus(name):
        return float(bonuses.get(name, 0.0))

    specs = [
        OptionSpec("Default", "D", _default_control, _duration_only, _always,
                   max_duration=duration),
        OptionSpec("Follow", "F", _follow_control, _duration_only,
                   _follow_applicable, max_duration=duration),
        OptionSpec("Pass", "P", _pass_control, _pass_terminated,
                   _pass_applicable, max_duration=duration),
        OptionSpec("Stop", "S", _stop_control, _stop_terminated,
                   _stop_applicable, goal=_stop_goal,
                   constraint=_STOP_CONSTRAINT, goal_bonus=bonus("Stop"),
                   max_duration=duration),
        OptionSpec("Wait", "W", _wait_control, _wait_terminated,
                   _wait_applicable, goal=_wait_goal,
                   constraint=_WAIT_CONSTRAINT, goal_bonus=bonus("Wait"),
                   max_duration=duration),
        OptionSpec("Left", "L", _lane_change_control, _lane_change_terminated,
                   _left_applicable, goal=_lane_change_goal,
                   goal_bonus=bonus("Left"), max_duration=duration),
        OptionSpec("Right", "R", _lane_change_control, _lane_change_terminated,
                   _right_applicable, goal=_lane_change_goal,
                   goal_bonus=bonus("Right"), max_duration=duration),
        OptionSpec("Finish", "C", _finish_control, _finish_terminated,
                   _always, max_duration=duration),
    ]
    return {spec.name: spec for spec in specs}


OPTIONS = build_options()
OPTION_ORDER = tuple(OPTIONS)  # fixed ordinal used for deterministic tie-breaks


def begin_option(option: OptionSpec, w: WorldState) -> OptionContext:
    """Bind invocation anchors; raises InapplicableOption when preconditions fail."""
    if not option.applicable(w):
        raise InapplicableOption(option.name)
    me = w.actors[0]
    veh = me.vehicle
    ctx = OptionContext(
        option=option,
        start_x=veh.p_x,
        start_lane=me.lane,
        target_lane=me.lane,
        stopped_at_start=me.has_stopped_in_stop_region,
        crossed_at_start=me.has_entered_intersection and not me.in_intersection,
    )
    if option.name == "Left":
        ctx.target_lane = 1
    elif option.name == "Right":
        ctx.target_lane = 0
    elif option.name == "Pass":
        ctx.leader = find_leader(w, 0)
    elif option.name == "Stop":
        env = w.env
        front = veh.p_x + FRONT_EXTENT
        reachable = front + veh.v * veh.v / (2.0 * STOP_PLAN_DECEL)
        halt_front = min(max(reachable, env.stop_region_mid), env.stop_region_end - 0.5)
        ctx.halt_x = halt_front - FRONT_EXTENT
    return ctx


ACCEL_SLEW_UP = 4.0  # m/s^3: throttle/brake-release comfort; braking is instant


def option_control(ctx: OptionContext, w: WorldState) -> tuple[float, float]:
    a, psi_dot = ctx.option.controller(ctx, w)
    prev = w.actors[0].vehicle.a
    limit = prev + ACCEL_SLEW_UP * w.env.dt
    if a > limit:
        a = limit
    return a, psi_dot


def option_terminated(ctx: OptionContext, w: WorldState, elapsed: float) -> bool:
    if w.status is not Status.RUNNING:
        return True
    if elapsed >= ctx.option.max_duration:
        return True
    return ctx.option.terminated(ctx, w, elapsed)


def option_goal_achieved(ctx: OptionContext, w: WorldState) -> bool:
    return ctx.option.goal is not None and ctx.option.goal(ctx, w)


def option_constraint(option: OptionSpec) -> Formula:
    return option.constraint
