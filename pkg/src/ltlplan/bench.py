"""Batch experiment runner, result export, and search-tree dumps.

Reproduces the evaluation protocol: seeded random worlds with 0-5 other
vehicles, optionally plus a stopped car ahead, run per planner variant
with one outcome per episode (success / collision / constraint
violation / timeout) and Table-style aggregate rows.
"""

from __future__ import annotations

import json
import logging
import statistics
from dataclasses import dataclass, field

from .features import RewardWeights, step_cost, terminal_reward
from .options import OPTIONS
from .planner import PlannerConfig, SearchNode, receding_horizon_run
from .prior import OptionPrior, load_prior, manual_prior, uniform_prior
from .sim import (
    Policy,
    Status,
    TraceWriter,
    advance_world,
    spawn_scenario,
)

log = logging.getLogger(__name__)

ENVIRONMENTS = ("NO_STOPPED_CAR", "STOPPED_CAR_AHEAD")
RESULT_COLUMNS = ("environment", "low_level", "high_level",
                  "constraint_violations", "collisions", "total_failures",
                  "avg_reward", "std_reward")


@dataclass(frozen=True)
class Variant:
    low_level: str = "options_mcts"  # options_mcts | manual_policy
    prior: str = "uniform"           # none | uniform | manual | learned
    prior_path: str = ""

    def label(self) -> tuple[str, str]:
        if self.low_level == "manual_policy":
            return "Manual Policy", "None"
        return "Options+MCTS", self.prior.capitalize()


@dataclass
class ExperimentConfig:
    environment: str = "NO_STOPPED_CAR"
    variants: list[Variant] = field(default_factory=lambda: [Variant()])
    n_worlds: int = 100
    seeds: list[int] = field(default_factory=list)
    planner: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.environment not in ENVIRONMENTS:
            raise ValueError(f"environment must be one of {ENVIRONMENTS}")
        if not self.variants:
            raise ValueError("variants must be nonempty")
        if not self.seeds:
            self.seeds = list(range(1, self.n_worlds + 1))
        if len(self.seeds) != self.n_worlds:
            raise ValueError("seeds length must equal n_worlds")


def load_experiment(path: str) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    variants = [Variant(**v) for v in raw.pop("variants", [])]
    cfg = ExperimentConfig(variants=variants or [Variant()], **raw)
    return cfg


@dataclass(frozen=True)
class ResultRow:
    environment: str
    low_level: str
    high_level: str
    constraint_violations: int
    collisions: int
    total_failures: int
    avg_reward: float
    std_reward: float


@dataclass
class EpisodeRecord:
    seed: int
    status: Status
    reward: float
    sim_time: float
    violated_rule: str | None


def build_prior(variant: Variant) -> OptionPrior | None:
    if variant.low_level == "manual_policy":
        return None
    if variant.prior in ("none", "uniform"):
        return uniform_prior()
    if variant.prior == "manual":
        return manual_prior()
    if variant.prior == "learned":
        if not variant.prior_path:
            raise ValueError("learned prior requires prior_path")
        return load_prior(variant.prior_path)
    raise ValueError(f"unknown prior {variant.prior!r}")


def run_manual_baseline(world, timeout_s: float = 60.0, trace=None) -> EpisodeRecord:
    """The agent drives the same aggressive scripted policy as everyone else."""
    w = world.clone()
    w.actors[0].policy = Policy.SCRIPTED
    goals = set()
    total = 0.0
    prev_a = w.actors[0].vehicle.a
    if trace is not None:
        trace.record(w)
    while w.status is Status.RUNNING and w.time < timeout_s:
        w = advance_world(w, (0.0, 0.0), w.env.dt)
        veh = w.actors[0].vehicle
        total += step_cost(w, (veh.a, veh.psi_dot), (prev_a, 0.0))
        prev_a = veh.a
        if trace is not None:
            trace.record(w)
        if "stopped_at_sign" not in goals and w.actors[0].has_stopped_in_stop_region:
            goals.add("stopped_at_sign")
        if w.status is Status.GOAL_REACHED:
            goals.add("exited_region")
    if w.status is Status.RUNNING:
        w.status = Status.TIMEOUT
    total += terminal_reward(w.status, goals)
    return EpisodeRecord(0, w.status, total, w.time, None)


def run_episode(variant: Variant, environment: str, seed: int,
                planner_overrides: dict, prior: OptionPrior | None,
                trace=None) -> EpisodeRecord:
    world = spawn_scenario(seed=seed, n_vehicles=seed % 6,
                           stopped_car=environment == "STOPPED_CAR_AHEAD")
    if variant.low_level == "manual_policy":
        record = run_manual_baseline(world, trace=trace)
    else:
        planner_overrides = dict(planner_overrides)
        weights = planner_overrides.get("reward_weights")
        if isinstance(weights, dict):
            planner_overrides["reward_weights"] = RewardWeights.from_dict(weights)
        cfg = PlannerConfig(seed=seed * 1000 + 1, **planner_overrides)
        result = receding_horizon_run(world, cfg, prior, trace=trace)
        record = EpisodeRecord(seed, result.status, result.reward,
                               result.sim_time, result.violated_rule)
    record.seed = seed
    return record


def _episode_task(task) -> EpisodeRecord:
    variant, environment, seed, planner_overrides, prior, trace_path = task
    trace = TraceWriter(trace_path) if trace_path else None
    try:
        return run_episode(variant, environment, seed, planner_overrides,
                           prior, trace)
    except Exception:
        log.exception("episode failed (variant=%s seed=%d)", variant, seed)
        return EpisodeRecord(seed, Status.TIMEOUT, float("nan"), 0.0,
                             "episode-error")
    finally:
        if trace is not None:
            trace.close()


def trace_name(environment: str, variant: Variant, seed: int) -> str:
    low, high = variant.label()
    return f"{environment}_{low}_{high}_{seed}".replace(" ", "").replace("+", "_")


def run_experiment(cfg: ExperimentConfig, traces_dir: str | None = None,
                   jobs: int = 1) -> list[ResultRow]:
    """Run every variant over every seeded world; deterministic in seeds.

    Episodes are independent; with jobs > 1 they run in a process pool and
    results are gathered in seed order, so the output is order-stable.
    """
    rows = []
    for variant in cfg.variants:
        prior = build_prior(variant)
        tasks = []
        for seed in cfg.seeds:
            trace_path = None
            if traces_dir is not None:
                trace_path = f"{traces_dir}/{trace_name(cfg.environment, variant, seed)}.csv"
            tasks.append((variant, cfg.environment, seed, cfg.planner, prior,
                          trace_path))
        if jobs > 1:
            import multiprocessing

            with multiprocessing.Pool(jobs) as pool:
                records = pool.map(_episode_task, tasks)
        else:
            records = [_episode_task(t) for t in tasks]
        rows.append(aggregate(cfg.environment, variant, records))
    return rows


def aggregate(environment: str, variant: Variant,
              records: list[EpisodeRecord]) -> ResultRow:
    collisions = sum(1 for r in records if r.status is Status.COLLIDED)
    violations = sum(1 for r in records if r.status is Status.CONSTRAINT_VIOLATED)
    timeouts = sum(1 for r in records if r.status is Status.TIMEOUT)
    rewards = [r.reward for r in records]
    low, high = variant.label()
    return ResultRow(
        environment=environment,
        low_level=low,
        high_level=high,
        constraint_violations=violations,
        collisions=collisions,
        total_failures=collisions + violations + timeouts,
        avg_reward=statistics.fmean(rewards) if rewards else 0.0,
        std_reward=statistics.stdev(rewards) if len(rewards) > 1 else 0.0,
    )


def export_results(rows: list[ResultRow], path: str,
                   seeds: list[int] | None = None) -> None:
    """Fixed-schema CSV plus a seed manifest next to it."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(RESULT_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join([
                row.environment, row.low_level, row.high_level,
                str(row.constraint_violations), str(row.collisions),
                str(row.total_failures),
                f"{row.avg_reward:.4f}", f"{row.std_reward:.4f}",
            ]) + "\n")
    if seeds is not None:
        with open(path + ".seeds.json", "w", encoding="utf-8") as fh:
            json.dump({"seeds": seeds}, fh)
            fh.write("\n")


def read_results(path: str) -> list[ResultRow]:
    import csv

    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(RESULT_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"results file missing columns: {sorted(missing)}")
        rows = []
        for rec in reader:
            rows.append(ResultRow(
                environment=rec["environment"],
                low_level=rec["low_level"],
                high_level=rec["high_level"],
                constraint_violations=int(rec["constraint_violations"]),
                collisions=int(rec["collisions"]),
                total_failures=int(rec["total_failures"]),
                avg_reward=float(rec["avg_reward"]),
                std_reward=float(rec["std_reward"]),
            ))
    return rows


def dump_tree(root: SearchNode, path: str) -> None:
    """DOT rendering: option letters on nodes, green/red terminal leaves."""
    lines = ["digraph search {", '  node [shape=circle fontsize=10];',
             '  n0 [label="0"];']
    counter = [0]

    def emit(node: SearchNode, node_id: str) -> None:
        for name, edge in node.edges.items():
            child = edge.child
            if child is None:
                continue
            counter[0] += 1
            child_id = f"n{counter[0]}"
            letter = OPTIONS[name].letter
            attrs = [f'label="{letter}"']
            if child.terminal:
                status = child.world.status
                if status is Status.GOAL_REACHED:
                    attrs.append("style=filled fillcolor=green")
                else:
                    attrs.append("style=filled fillcolor=red")
            lines.append(f"  {child_id} [{' '.join(attrs)}];")
            lines.append(f"  {node_id} -> {child_id} [label=\"{edge.count}\"];")
            emit(child, child_id)

    emit(root, "n0")
    lines.append("}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
