"""Monte Carlo tree search over options with in-loop LTL monitoring.

Each tree edge holds one full option execution simulated at world rate,
with every road-rule monitor (and the option's own constraint) stepped
on each new state; a violation or collision makes the child terminal
with the failure penalty folded into the edge reward. Selection uses
the prior-weighted exploration bonus C * P / (1 + N), expansion is
capped by progressive widening (N^alpha), leaf values come from a
prior-guided rollout to the time horizon, and backups add undiscounted
path sums. `receding_horizon_run` alternates one search per replan
period with execution of the plan prefix.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .features import (
    DEFAULT_WEIGHTS,
    FAILURE_PENALTY,
    GOAL_REWARD,
    RewardWeights,
    features,
    step_cost,
)
from .ltl import Formula, TRUE, build_monitor, StateClass
from .options import (
    InapplicableOption,
    OPTION_ORDER,
    begin_option,
    build_options,
    option_control,
    option_goal_achieved,
    option_terminated,
)
from .prior import OptionPrior, predict, rollout_policy
from .rules import road_rules
from .sim.engine import step_world_inplace
from .sim.world import (
    ALPHABET,
    Status,
    WorldState,
    label_bitmask,
    label_from_bits,
)

N_ATOM_MASKS = 1 << 9


@dataclass
class PlannerConfig:
    iterations: int = 100
    horizon: float = 10.0           # seconds of lookahead per search
    exploration: float = 1.25       # C in the PUCT-style bonus
    widening_exponent: float = 0.5  # alpha
    rollout_max_options: int = 32
    replan_period: float = 1.0
    episode_timeout: float = 60.0
    seed: int = 0
    # plan extraction refuses monitor-proven violating edges; self-play data
    # collection turns this off to keep failure examples in the dataset
    guard_extraction: bool = True
    inapplicable_penalty: float = FAILURE_PENALTY
    option_overrides: dict = field(default_factory=dict)
    reward_weights: RewardWeights = DEFAULT_WEIGHTS

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0.0 < self.widening_exponent < 1.0:
            raise ValueError("widening exponent must be in (0, 1)")
        if self.horizon <= 0.0:
            raise ValueError("horizon must be positive")


class CompiledRule:
    """Monitor automaton plus a 512-entry map from packed labels."""

    __slots__ = ("name", "automaton", "table")

    def __init__(self, name: str, formula: Formula):
        self.name = name
        self.automaton = build_monitor(formula, ALPHABET)
        self.table = [self.automaton.label_mask(label_from_bits(m))
                      for m in range(N_ATOM_MASKS)]


DISCHARGED = -1  # monitor reached an accepting trap; nothing left to check


class PlannerRuntime:
    """Immutable per-episode machinery: options, rules, weights."""

    def __init__(self, cfg: PlannerConfig, rules: dict[str, Formula] | None = None):
        self.cfg = cfg
        self.options = build_options(cfg.option_overrides)
        self.rules = [CompiledRule(name, f)
                      for name, f in (rules or road_rules()).items()]
        self.option_rules = {
            name: CompiledRule(name, spec.constraint)
            for name, spec in self.options.items() if spec.constraint != TRUE
        }
        self.weights = cfg.reward_weights

    def initial_monitor_states(self) -> tuple[int, ...]:
        return tuple(rule.automaton.initial for rule in self.rules)


@dataclass
class SimOutcome:
    world: WorldState
    monitors: tuple[int, ...]
    reward: float
    steps: int
    terminal: bool
    violated_rule: str | None
    goals: frozenset


def simulate_option(world: WorldState, monitors: tuple[int, ...], name: str,
                    runtime: PlannerRuntime, time_budget: float,
                    clone: bool = True, trace=None) -> SimOutcome:
    """Run one option to termination, stepping every active monitor.

    Accounting: step costs each tick, +goal rewards when an episode goal
    flips, the option's bonus on success, and the failure penalty when a
    collision or any monitor rejection ends the episode.
    """
    spec = runtime.options[name]
    w = world.clone() if clone else world
    try:
        ctx = begin_option(spec, w)
    except InapplicableOption:
        w.status = Status.CONSTRAINT_VIOLATED
        return SimOutcome(w, monitors, runtime.cfg.inapplicable_penalty, 0,
                          True, "inapplicable:" + name, frozenset())

    dt = w.env.dt
    rules = runtime.rules
    opt_rule = runtime.option_rules.get(name)
    opt_state = opt_rule.automaton.initial if opt_rule is not None else DISCHARGED
    states = list(monitors)
    agent = w.actors[0]
    prev_a = agent.vehicle.a
    total = 0.0
    steps = 0
    elapsed = 0.0
    goals = []
    stopped_before = agent.has_stopped_in_stop_region
    violated = None
    terminal = False

    while True:
        u = option_control(ctx, w)
        step_world_inplace(w, u, dt)
        if trace is not None:
            trace.record(w)
        total += step_cost(w, u, (prev_a, 0.0), runtime.weights)
        prev_a = u[0]
        steps += 1
        elapsed += dt

        if not stopped_before and agent.has_stopped_in_stop_region:
            stopped_before = True
            goals.append("stopped_at_sign")
            total += GOAL_REWARD
        if w.status is Status.GOAL_REACHED:
            goals.append("exited_region")
            total += GOAL_REWARD

        mask = label_bitmask(w, 0)
        for i, rule in enumerate(rules):
            state = states[i]
            if state == DISCHARGED:
                continue
            auto = rule.automaton
            state = auto.transitions[state][rule.table[mask]]
            cls = auto.classes[state]
            if cls is StateClass.REJECTING_TRAP:
                violated = rule.name
                break
            states[i] = DISCHARGED if cls is StateClass.ACCEPTING_TRAP else state

        if violated is not None:
            w.status = Status.CONSTRAINT_VIOLATED
            total += FAILURE_PENALTY
            terminal = True
            break
        if w.status is Status.COLLIDED:
            total += FAILURE_PENALTY
            terminal = True
            break
        if w.status is not Status.RUNNING:
            terminal = True
            break

        if option_terminated(ctx, w, elapsed):
            # the completion state is not checked against the option's own
            # constraint: the obligation ends with the option
            if option_goal_achieved(ctx, w):
                total += spec.goal_bonus
            break
        if opt_rule is not None and opt_state != DISCHARGED:
            auto = opt_rule.automaton
            opt_state = auto.transitions[opt_state][opt_rule.table[mask]]
            cls = auto.classes[opt_state]
            if cls is StateClass.REJECTING_TRAP:
                w.status = Status.CONSTRAINT_VIOLATED
                total += FAILURE_PENALTY
                violated = "option:" + name
                terminal = True
                break
            if cls is StateClass.ACCEPTING_TRAP:
                opt_state = DISCHARGED
        if elapsed >= time_budget - 1e-9:
            break

    return SimOutcome(w, tuple(states), total, steps, terminal, violated,
                      frozenset(goals))


def puct_score(mean: float, prior: float, count: int, c: float) -> float:
    """Selection score: exploitation plus the prior-weighted bonus."""
    return mean + c * prior / (1.0 + count)


class Edge:
    __slots__ = ("prior", "count", "total", "reward", "child")

    def __init__(self, prior: float):
        self.prior = prior
        self.count = 0
        self.total = 0.0
        self.reward = 0.0
        self.child: SearchNode | None = None

    @property
    def mean(self) -> float:
        return self.total / self.count if self.count else 0.0


class SearchNode:
    __slots__ = ("world", "monitors", "time", "visits", "edges", "prior_dist",
                 "applicable", "terminal", "outcome")

    def __init__(self, world: WorldState, monitors: tuple[int, ...], time: float,
                 terminal: bool, runtime: PlannerRuntime,
                 prior: OptionPrior, outcome: SimOutcome | None = None):
        self.world = world
        self.monitors = monitors
        self.time = time
        self.visits = 1  # expansion visit
        self.edges: dict[str, Edge] = {}
        self.terminal = terminal
        self.outcome = outcome
        if terminal:
            self.applicable = []
            self.prior_dist = {}
        else:
            self.applicable = [n for n in OPTION_ORDER
                               if runtime.options[n].applicable(world)]
            if self.applicable:
                self.prior_dist = predict(prior, features(world, 0), self.applicable)
            else:
                self.prior_dist = {}

    def widen(self, alpha: float) -> None:
        if len(self.edges) >= len(self.applicable):
            return
        allowed = max(1, int(self.visits ** alpha))
        if len(self.edges) >= allowed:
            return
        best = None
        for name in self.applicable:  # fixed ordinal order breaks prior ties
            if name not in self.edges and (
                    best is None or self.prior_dist[name] > self.prior_dist[best]):
                best = name
        self.edges[best] = Edge(self.prior_dist[best])
        assert len(self.edges) <= allowed

    def select(self, c: float) -> str:
        best_name = None
        best_score = -math.inf
        for name in self.applicable:  # fixed ordinal order breaks score ties
            edge = self.edges.get(name)
            if edge is None:
                continue
            score = puct_score(edge.mean, edge.prior, edge.count, c)
            if score > best_score:
                best_name, best_score = name, score
        return best_name


def _known_failure(edge: Edge) -> bool:
    # only monitor-proven rule violations are vetoed outright; collision
    # risk stays with the value estimates, where prior quality matters
    child = edge.child
    return (child is not None and child.terminal
            and child.world.status is Status.CONSTRAINT_VIOLATED)


@dataclass
class SearchResult:
    plan: list[str]
    root: SearchNode
    stats: dict[str, tuple[int, float, float]]  # name -> (N, Q, P)


def _rollout(node: SearchNode, runtime: PlannerRuntime, prior: OptionPrior,
             rng: random.Random) -> float:
    cfg = runtime.cfg
    w = node.world.clone()
    monitors = node.monitors
    t = node.time
    total = 0.0
    for _ in range(cfg.rollout_max_options):
        if t >= cfg.horizon or w.status is not Status.RUNNING:
            break
        applicable = [n for n in OPTION_ORDER if runtime.options[n].applicable(w)]
        if not applicable:
            break
        name = rollout_policy(prior, features(w, 0), applicable, rng)
        out = simulate_option(w, monitors, name, runtime,
                              time_budget=cfg.horizon - t, clone=False)
        w = out.world
        monitors = out.monitors
        total += out.reward
        t += out.steps * w.env.dt
        if out.terminal:
            break
    return total


def search(root_world: WorldState, cfg: PlannerConfig, prior: OptionPrior,
           runtime: PlannerRuntime | None = None,
           rng: random.Random | None = None) -> SearchResult:
    """Run cfg.iterations of select/expand/simulate/backup from the root."""
    if root_world.status is not Status.RUNNING:
        raise ValueError("search requires a running world")
    runtime = runtime or PlannerRuntime(cfg)
    rng = rng or random.Random(cfg.seed)
    root = SearchNode(root_world, runtime.initial_monitor_states(), 0.0,
                      False, runtime, prior)

    for _ in range(cfg.iterations):
        node = root
        path: list[tuple[SearchNode, Edge]] = []
        tail = 0.0
        while True:
            if node.terminal or node.time >= cfg.horizon or not node.applicable:
                break
            node.widen(cfg.widening_exponent)
            name = node.select(cfg.exploration)
            edge = node.edges[name]
            path.append((node, edge))
            if edge.child is None:
                out = simulate_option(node.world, node.monitors, name, runtime,
                                      time_budget=cfg.horizon - node.time)
                child_time = node.time + out.steps * root_world.env.dt
                child = SearchNode(out.world, out.monitors, child_time,
                                   out.terminal, runtime, prior, outcome=out)
                edge.reward = out.reward
                edge.child = child
                if not child.terminal and child_time < cfg.horizon:
                    tail = _rollout(child, runtime, prior, rng)
                break
            node = edge.child

        value = tail
        for parent, edge in reversed(path):
            value = edge.reward + value
            edge.count += 1
            edge.total += value
            parent.visits += 1

    plan = []
    node = root
    while node is not None and node.edges:
        ordered = [n for n in OPTION_ORDER if n in node.edges]
        # robust-child rule, but never hand a proven-violating edge to the
        # executor while an alternative exists; if everything violates the
        # max-visit (least-bad) choice stands
        safe = ordered
        if cfg.guard_extraction:
            safe = [n for n in ordered if not _known_failure(node.edges[n])] or ordered
        name = max(safe, key=lambda n: node.edges[n].count)
        plan.append(name)
        node = node.edges[name].child
        if node is None or node.terminal:
            break
    stats = {name: (edge.count, edge.mean, edge.prior)
             for name, edge in root.edges.items()}
    return SearchResult(plan, root, stats)


@dataclass
class EpisodeResult:
    status: Status
    reward: float
    goals: frozenset
    violated_rule: str | None
    sim_time: float
    searches: int
    transitions: list
    first_root: SearchNode | None

    @property
    def collided(self) -> bool:
        return self.status is Status.COLLIDED

    @property
    def violated(self) -> bool:
        return self.status is Status.CONSTRAINT_VIOLATED


def receding_horizon_run(scenario: WorldState, cfg: PlannerConfig,
                         prior: OptionPrior, trace=None) -> EpisodeResult:
    """Alternate searching and executing until the episode resolves."""
    from .prior import Transition

    runtime = PlannerRuntime(cfg)
    master = random.Random(cfg.seed)
    w = scenario.clone()
    monitors = runtime.initial_monitor_states()
    goals: set[str] = set()
    total = 0.0
    searches = 0
    transitions = []
    violated_rule = None
    first_root = None
    if trace is not None:
        trace.record(w)

    while w.status is Status.RUNNING and w.time < cfg.episode_timeout:
        result = search(w, cfg, prior, runtime,
                        rng=random.Random(master.getrandbits(32)))
        searches += 1
        if first_root is None:
            first_root = result.root

        period_left = cfg.replan_period
        for name in result.plan or ["Default"]:
            if w.status is not Status.RUNNING or period_left <= 1e-9:
                break
            feats_before = tuple(features(w, 0))
            out = simulate_option(w, monitors, name, runtime,
                                  time_budget=period_left, clone=False,
                                  trace=trace)
            w = out.world
            monitors = out.monitors
            total += out.reward
            goals |= out.goals
            period_left -= out.steps * w.env.dt
            if out.violated_rule is not None:
                violated_rule = out.violated_rule
            transitions.append(Transition(
                feats_before, name, out.reward,
                tuple(features(w, 0)), out.terminal))
            if out.steps == 0:
                break  # zero-length execution: replan rather than spin

    if w.status is Status.RUNNING:
        w.status = Status.TIMEOUT

    return EpisodeResult(w.status, total, frozenset(goals), violated_rule,
                         w.time, searches, transitions, first_root)
