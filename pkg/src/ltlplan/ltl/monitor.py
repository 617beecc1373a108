"""Deterministic progression monitor with three-valued trap verdicts.

States are canonical normalized formulas reachable from the root formula
under `progress`. Tarjan SCC analysis over the transition graph marks
the `true`/`false` sinks as accepting/rejecting traps and extends the
marking to every state whose entire future lies in one verdict class.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .formula import FALSE, TRUE, Formula, atoms_of, normalize, progress
from .sat import satisfiable, valid
from .scc import tarjan_sccs


class StateClass(enum.Enum):
    ACCEPTING_TRAP = "accepting_trap"
    REJECTING_TRAP = "rejecting_trap"
    NEUTRAL = "neutral"


class VerdictKind(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class MonitorVerdict:
    kind: VerdictKind
    step: int | None = None

    @property
    def determined(self) -> bool:
        return self.kind is not VerdictKind.UNDETERMINED


UNDETERMINED = MonitorVerdict(VerdictKind.UNDETERMINED)


class StateBudgetExceeded(RuntimeError):
    """Progression closure larger than the requested state budget."""


class MonitorAutomaton:
    """Immutable after construction; safe to share across threads."""

    def __init__(self, states: list[Formula], support: tuple[str, ...],
                 transitions: list[list[int]], initial: int,
                 classes: list[StateClass], alphabet: frozenset[str]):
        self.states = states
        self.support = support
        self.transitions = transitions
        self.initial = initial
        self.classes = classes
        self.alphabet = alphabet
        self._bit = {name: 1 << i for i, name in enumerate(support)}

    def label_mask(self, label: frozenset[str]) -> int:
        bit = self._bit
        mask = 0
        for name in label:
            b = bit.get(name)
            if b is not None:
                mask |= b
        return mask

    def step(self, state: int, mask: int) -> int:
        return self.transitions[state][mask]

    def state_class(self, state: int) -> StateClass:
        return self.classes[state]


def build_monitor(f: Formula, alphabet: frozenset[str] | set[str],
                  state_budget: int = 4096) -> MonitorAutomaton:
    """Explore the progression closure of `f` and classify its states."""
    if state_budget <= 0:
        raise ValueError("state_budget must be positive")
    root = normalize(f)
    alphabet = frozenset(alphabet)
    support = tuple(sorted(atoms_of(root)))
    n_labels = 1 << len(support)
    labels = [frozenset(name for i, name in enumerate(support) if mask >> i & 1)
              for mask in range(n_labels)]

    states: dict[Formula, int] = {root: 0}
    order: list[Formula] = [root]
    transitions: list[list[int]] = [[]]
    frontier = [root]
    while frontier:
        current = frontier.pop()
        row = []
        for label in labels:
            nxt = progress(current, label)
            idx = states.get(nxt)
            if idx is None:
                idx = len(order)
                if idx >= state_budget:
                    raise StateBudgetExceeded(
                        f"progression closure of '{root}' exceeds {state_budget} states")
                states[nxt] = idx
                order.append(nxt)
                transitions.append([])
                frontier.append(nxt)
            row.append(idx)
        transitions[states[current]] = row

    successors = [sorted(set(row)) for row in transitions]
    classes = [StateClass.NEUTRAL] * len(order)
    scc_of = [0] * len(order)
    sccs = tarjan_sccs(len(order), successors)
    for comp_id, comp in enumerate(sccs):
        for v in comp:
            scc_of[v] = comp_id

    # Components arrive sinks-first, so downstream classes settle before a
    # component is examined. The `true`/`false` sinks seed the two verdict
    # classes; a component reaching both is neutral outright. Anything else
    # is decided semantically (validity / unsatisfiability of its residual
    # formula), which states within one SCC share.
    comp_class: list[StateClass] = [StateClass.NEUTRAL] * len(sccs)
    comp_reach: list[set[StateClass]] = [set() for _ in sccs]
    for comp_id, comp in enumerate(sccs):
        members = set(comp)
        downstream = {scc_of[w] for v in comp for w in successors[v] if w not in members}
        reach: set[StateClass] = set()
        for d in downstream:
            reach.add(comp_class[d])
            reach |= comp_reach[d]
        comp_reach[comp_id] = reach

        if any(order[v] == TRUE for v in comp):
            comp_class[comp_id] = StateClass.ACCEPTING_TRAP
            continue
        if any(order[v] == FALSE for v in comp):
            comp_class[comp_id] = StateClass.REJECTING_TRAP
            continue
        if (StateClass.ACCEPTING_TRAP in reach
                and StateClass.REJECTING_TRAP in reach):
            continue
        rep = order[comp[0]]
        if valid(rep):
            comp_class[comp_id] = StateClass.ACCEPTING_TRAP
        elif not satisfiable(rep):
            comp_class[comp_id] = StateClass.REJECTING_TRAP
    for v in range(len(order)):
        classes[v] = comp_class[scc_of[v]]

    return MonitorAutomaton(order, support, transitions, 0, classes, alphabet)


def check_trace(m: MonitorAutomaton, trace: list[frozenset[str]] | tuple) -> MonitorVerdict:
    """Run the automaton over the trace; linear in the trace length."""
    state = m.initial
    cls = m.classes[state]
    if cls is StateClass.ACCEPTING_TRAP:
        return MonitorVerdict(VerdictKind.SATISFIED, 0)
    if cls is StateClass.REJECTING_TRAP:
        return MonitorVerdict(VerdictKind.VIOLATED, 0)
    transitions = m.transitions
    classes = m.classes
    for i, label in enumerate(trace):
        state = transitions[state][m.label_mask(label)]
        cls = classes[state]
        if cls is not StateClass.NEUTRAL:
            if cls is StateClass.ACCEPTING_TRAP:
                return MonitorVerdict(VerdictKind.SATISFIED, i)
            return MonitorVerdict(VerdictKind.VIOLATED, i)
    return UNDETERMINED
