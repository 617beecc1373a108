"""Scenario generation and file interfaces.

Scenario JSON: {seed, n_vehicles, stopped_car, speed_limit_mps,
lane_width_m, segment_length_m, dt} plus optional "reward_weights" and
"options" blocks consumed by other modules. Trace CSV: one row per
(t, actor, p_x, p_y, theta, v, psi, a, psi_dot, lane, predicates) with
world-frame positions and the predicate truth set packed into a bitmask
over AP_ORDER.
"""

from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass, field

from .road import FRONT_EXTENT, RoadEnvironment, VEHICLE_LENGTH
from .vehicle import VehicleState
from .world import ActorState, Policy, WorldState, label_bitmask, refresh_zone_state

MAX_VEHICLES = 5
# rear-axle spacing; 12 m bumper gaps leave room to absorb spawn speed spreads
MIN_SPAWN_GAP = VEHICLE_LENGTH + 12.0
TRACE_COLUMNS = ("t", "actor", "p_x", "p_y", "theta", "v", "psi",
                 "a", "psi_dot", "lane", "predicates")


class PlacementInfeasible(RuntimeError):
    pass


@dataclass
class ScenarioConfig:
    seed: int = 0
    n_vehicles: int = 0
    stopped_car: bool = False
    speed_limit_mps: float = 11.18
    lane_width_m: float = 3.0
    segment_length_m: float = 90.0
    dt: float = 0.1
    reward_weights: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)

    def environment(self) -> RoadEnvironment:
        return RoadEnvironment(
            lane_width=self.lane_width_m,
            segment_length=self.segment_length_m,
            speed_limit=self.speed_limit_mps,
            dt=self.dt,
        )


def load_scenario(path: str) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    known = {f for f in ScenarioConfig.__dataclass_fields__}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
    return ScenarioConfig(**raw)


def save_scenario(cfg: ScenarioConfig, path: str) -> None:
    payload = {k: getattr(cfg, k) for k in ScenarioConfig.__dataclass_fields__}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _spawn_speed(rng: random.Random, env: RoadEnvironment, x: float) -> float:
    return rng.uniform(0.5, 1.0) * env.reference_speed(x, has_stopped=False)


def spawn_scenario(seed: int, n_vehicles: int, stopped_car: bool,
                   env: RoadEnvironment | None = None) -> WorldState:
    """Deterministic-in-seed world with the agent plus 0..5 other vehicles."""
    if n_vehicles > MAX_VEHICLES:
        raise ValueError(f"n_vehicles must be <= {MAX_VEHICLES}")
    env = env or RoadEnvironment()
    rng = random.Random(seed)

    agent_lane = rng.randrange(2)
    agent_x = rng.uniform(2.0, 12.0)
    agent = ActorState(
        VehicleState(p_x=agent_x, p_y=env.lane_center(agent_lane),
                     v=_spawn_speed(rng, env, agent_x)),
        route=0, lane=agent_lane, policy=Policy.PLANNER,
    )
    w = WorldState(env, [agent])

    taken: dict[tuple[int, int], list[float]] = {(0, agent_lane): [agent_x]}

    def try_place(route: int, lane: int, x: float) -> bool:
        spots = taken.setdefault((route, lane), [])
        if any(abs(x - other) < MIN_SPAWN_GAP for other in spots):
            return False
        # keep spawns out of the box so initial states are unambiguous
        if env.intersection_start - VEHICLE_LENGTH < x < env.intersection_end + 1.0:
            return False
        spots.append(x)
        return True

    if stopped_car:
        lo = agent_x + 18.0
        # keep the stall clear of the stop region so it never reads as a
        # vehicle waiting at the line
        hi = max(env.stop_region_start - FRONT_EXTENT - 0.5, lo + 4.0)
        for attempt in range(1000):
            x = rng.uniform(lo, hi)
            if try_place(0, agent_lane, x):
                break
        else:
            raise PlacementInfeasible(f"no stopped-car slot (seed {seed})")
        w.actors.append(ActorState(
            VehicleState(p_x=x, p_y=env.lane_center(agent_lane), v=0.0),
            route=0, lane=agent_lane, policy=Policy.STOPPED,
        ))

    for _ in range(n_vehicles):
        for attempt in range(1000):
            route = rng.randrange(2)
            lane = rng.randrange(2)
            x = rng.uniform(2.0, env.segment_length - 10.0)
            if try_place(route, lane, x):
                break
        else:
            raise PlacementInfeasible(f"no spawn slot after 1000 attempts (seed {seed})")
        w.actors.append(ActorState(
            VehicleState(p_x=x, p_y=env.lane_center(lane), v=_spawn_speed(rng, env, x)),
            route=route, lane=lane, policy=Policy.SCRIPTED,
        ))

    for actor in w.actors:
        refresh_zone_state(env, actor)
    return w


class TraceWriter:
    def __init__(self, path: str):
        self._fh = open(path, "w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._fh)
        self._writer.writerow(TRACE_COLUMNS)

    def record(self, w: WorldState) -> None:
        env = w.env
        for idx, actor in enumerate(w.actors):
            veh = actor.vehicle
            wx, wy = env.to_world(actor.route, veh.p_x, veh.p_y)
            self._writer.writerow((
                f"{w.time:.1f}", idx, f"{wx:.4f}", f"{wy:.4f}",
                f"{env.world_heading(actor.route, veh.theta):.5f}",
                f"{veh.v:.4f}", f"{veh.psi:.5f}", f"{veh.a:.4f}",
                f"{veh.psi_dot:.5f}", actor.lane, label_bitmask(w, idx),
            ))

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_trace(path: str) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(TRACE_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"trace file missing columns: {sorted(missing)}")
        return [row for row in reader]


def agent_labels_from_trace(rows: list[dict]) -> list[frozenset[str]]:
    """Rebuild the agent's label sequence from the predicate bitmask column."""
    from .world import AP_ORDER

    out = []
    for row in rows:
        if int(row["actor"]) != 0:
            continue
        mask = int(row["predicates"])
        out.append(frozenset(name for i, name in enumerate(AP_ORDER) if mask >> i & 1))
    return out
