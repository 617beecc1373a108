#!/usr/bin/env python3
"""Run the full comparison grid and export one results CSV per suite.

Covers both environments with the manual-policy baseline and the three
planner priors, writing Table-style rows plus optional per-episode
traces for the plotting scripts.
"""

import argparse
import pathlib
import sys
import time

from ltlplan.bench import ExperimentConfig, Variant, export_results, run_experiment


def variants(prior_path: str) -> list[Variant]:
    return [
        Variant(low_level="manual_policy", prior="none"),
        Variant(low_level="options_mcts", prior="uniform"),
        Variant(low_level="options_mcts", prior="manual"),
        Variant(low_level="options_mcts", prior="learned", prior_path=prior_path),
    ]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--prior", default="assets/prior_learned.json")
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--n-worlds", type=int, default=100)
    parser.add_argument("--iterations", type=int, default=100)
    parser.add_argument("--traces", action="store_true",
                        help="also write per-episode trace CSVs")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args(argv)

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for environment in ("NO_STOPPED_CAR", "STOPPED_CAR_AHEAD"):
        cfg = ExperimentConfig(
            environment=environment,
            variants=variants(args.prior),
            n_worlds=args.n_worlds,
            planner={"iterations": args.iterations},
        )
        traces_dir = None
        if args.traces:
            traces_dir = out_dir / f"traces_{environment.lower()}"
            traces_dir.mkdir(exist_ok=True)
        t0 = time.perf_counter()
        rows = run_experiment(cfg, traces_dir=str(traces_dir) if traces_dir else None,
                              jobs=args.jobs)
        out = out_dir / f"results_{environment.lower()}.csv"
        export_results(rows, str(out), seeds=cfg.seeds)
        print(f"{environment} ({time.perf_counter() - t0:.0f}s) -> {out}")
        for row in rows:
            print(f"  {row.low_level:13s} {row.high_level:8s} "
                  f"violations={row.constraint_violations:2d} "
                  f"collisions={row.collisions:2d} failures={row.total_failures:2d} "
                  f"avg={row.avg_reward:7.1f} std={row.std_reward:6.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
