"""Command-line interface: single planned episodes and benchmark batches."""

from __future__ import annotations

import argparse
import json
import sys

from .bench import dump_tree, export_results, load_experiment, run_experiment
from .features import RewardWeights
from .planner import PlannerConfig, receding_horizon_run
from .prior import load_prior, manual_prior, uniform_prior
from .sim import Status, TraceWriter, load_scenario, spawn_scenario


def parse_prior(spec: str):
    if spec == "uniform":
        return uniform_prior()
    if spec == "manual":
        return manual_prior()
    if spec.startswith("learned:"):
        return load_prior(spec.split(":", 1)[1])
    raise argparse.ArgumentTypeError(
        f"prior must be uniform, manual, or learned:<path>, got {spec!r}")


def cmd_plan(args) -> int:
    scenario = load_scenario(args.scenario)
    world = spawn_scenario(seed=scenario.seed, n_vehicles=scenario.n_vehicles,
                           stopped_car=scenario.stopped_car,
                           env=scenario.environment())
    overrides = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            overrides = json.load(fh)
    if scenario.options:
        overrides.setdefault("option_overrides", scenario.options)
    if scenario.reward_weights:
        overrides.setdefault("reward_weights", scenario.reward_weights)
    if isinstance(overrides.get("reward_weights"), dict):
        overrides["reward_weights"] = RewardWeights.from_dict(overrides["reward_weights"])
    cfg = PlannerConfig(seed=args.seed, **overrides)

    trace = TraceWriter(args.trace) if args.trace else None
    try:
        result = receding_horizon_run(world, cfg, args.prior, trace=trace)
    finally:
        if trace is not None:
            trace.close()
    if args.tree and result.first_root is not None:
        dump_tree(result.first_root, args.tree)

    print(f"status: {result.status.value}")
    print(f"reward: {result.reward:.2f}")
    print(f"sim_time: {result.sim_time:.1f}")
    print(f"goals: {sorted(result.goals)}")
    if result.violated_rule:
        print(f"violated: {result.violated_rule}")
    if result.status in (Status.COLLIDED, Status.CONSTRAINT_VIOLATED):
        return 2
    return 0


def cmd_bench(args) -> int:
    cfg = load_experiment(args.experiment)
    rows = run_experiment(cfg, traces_dir=args.traces, jobs=args.jobs)
    export_results(rows, args.out, seeds=cfg.seeds)
    for row in rows:
        print(f"{row.environment} | {row.low_level} / {row.high_level}: "
              f"violations={row.constraint_violations} collisions={row.collisions} "
              f"failures={row.total_failures} avg={row.avg_reward:.1f} "
              f"std={row.std_reward:.1f}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="ltlplan", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", help="run one planned episode")
    plan.add_argument("--scenario", required=True)
    plan.add_argument("--config", default=None, help="planner config JSON")
    plan.add_argument("--prior", type=parse_prior, default=uniform_prior())
    plan.add_argument("--seed", type=int, default=0)
    plan.add_argument("--trace", default=None, help="write episode trace CSV")
    plan.add_argument("--tree", default=None, help="write first search tree (DOT)")
    plan.set_defaults(func=cmd_plan)

    bench = sub.add_parser("bench", help="run a benchmark experiment")
    bench.add_argument("--experiment", required=True)
    bench.add_argument("--out", required=True)
    bench.add_argument("--traces", default=None, help="directory for trace CSVs")
    bench.add_argument("--jobs", type=int, default=1)
    bench.set_defaults(func=cmd_bench)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
