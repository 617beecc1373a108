#!/usr/bin/env python3
"""Train the learned option prior by fitted Q-iteration over self-play.

Self-play runs the planner with the uniform prior over a seeded mix of
plain and stopped-car worlds (seeds disjoint from the benchmark range),
logging one transition per executed option. The fitted prior is written
as JSON for `--prior learned:<path>`.
"""

import argparse
import random
import sys
import time

from ltlplan.planner import PlannerConfig, receding_horizon_run
from ltlplan.prior import save_prior, train_prior, uniform_prior
from ltlplan.sim import spawn_scenario


def collect(n_episodes: int, base_seed: int, iterations: int, verbose: bool):
    prior = uniform_prior()
    transitions = []
    outcomes = {}
    t0 = time.perf_counter()
    for k in range(n_episodes):
        seed = base_seed + k
        rng = random.Random(seed)
        stopped_car = k % 2 == 1
        n_vehicles = rng.randrange(6)
        world = spawn_scenario(seed=seed, n_vehicles=n_vehicles,
                               stopped_car=stopped_car)
        cfg = PlannerConfig(iterations=iterations, seed=seed * 7 + 1,
                            guard_extraction=False)
        result = receding_horizon_run(world, cfg, prior)
        transitions.extend(result.transitions)
        outcomes[result.status.value] = outcomes.get(result.status.value, 0) + 1
        if verbose and (k + 1) % 20 == 0:
            rate = (k + 1) / (time.perf_counter() - t0)
            print(f"  {k + 1}/{n_episodes} episodes "
                  f"({len(transitions)} transitions, {rate:.1f} ep/s)")
    print(f"self-play outcomes: {outcomes}")
    return transitions


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--episodes", type=int, default=200)
    parser.add_argument("--base-seed", type=int, default=10_001,
                        help="first self-play seed (keep clear of benchmark seeds)")
    parser.add_argument("--iterations", type=int, default=100,
                        help="MCTS iterations per search during self-play")
    parser.add_argument("--fqi-iterations", type=int, default=25)
    parser.add_argument("--gamma", type=float, default=0.95)
    parser.add_argument("--tau", type=float, default=15.0,
                        help="softmax temperature; fitted Q spans hundreds of "
                             "reward units, so a few tens keeps the prior soft")
    parser.add_argument("--out", default="assets/prior_learned.json")
    parser.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)

    transitions = collect(args.episodes, args.base_seed, args.iterations,
                          verbose=not args.quiet)
    print(f"training on {len(transitions)} transitions")
    prior = train_prior(transitions, iterations=args.fqi_iterations,
                        gamma=args.gamma, tau=args.tau)
    save_prior(prior, args.out)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
