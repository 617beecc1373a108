"""Satisfiability of normalized formulas via a clause tableau.

A clause is a conjunction of temporal/atomic terms. Successor clauses
arise from progressing each term under a label, with a nondeterministic
choice per eventuality (fulfil now vs defer). A formula is satisfiable
iff the tableau reaches the empty clause or some reachable SCC fulfils
every eventuality occurring in it on an internal edge (generalized
Buchi emptiness on a graph that stays tiny for this fragment).

The monitor uses this to classify residual states semantically:
accepting trap = valid formula, rejecting trap = unsatisfiable one.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .formula import (
    FALSE,
    TRUE,
    Always,
    And,
    Atom,
    Formula,
    Next,
    Not,
    Or,
    Until,
    _gather_and,
    _negate_normal,
    atoms_of,
    normalize,
    progress,
)
from .scc import tarjan_sccs

Clause = frozenset


def _clauses(f: Formula) -> list[Clause]:
    if f == TRUE:
        return [frozenset()]
    if f == FALSE:
        return []
    if isinstance(f, Or):
        return [_clause_of(c) for c in f.children]
    return [_clause_of(f)]


def _clause_of(f: Formula) -> Clause:
    return frozenset(f.children) if isinstance(f, And) else frozenset((f,))


def _is_eventuality(t: Formula) -> bool:
    return isinstance(t, Until) or (isinstance(t, Not) and isinstance(t.child, Always))


def _term_options(t: Formula, label: frozenset[str]) -> list[tuple[Formula, Formula | None]]:
    """(next obligation, eventuality fulfilled by the choice) alternatives."""
    if isinstance(t, Atom):
        return [(TRUE, None)] if t.name in label else []
    if isinstance(t, Until):
        options = []
        fulfil = progress(t.right, label)
        if fulfil != FALSE:
            options.append((fulfil, t))
        defer = _gather_and((progress(t.left, label), t))
        if defer != FALSE:
            options.append((defer, None))
        return options
    if isinstance(t, Always):
        nxt = _gather_and((progress(t.child, label), t))
        return [] if nxt == FALSE else [(nxt, None)]
    if isinstance(t, Next):
        return [(t.child, None)]
    if isinstance(t, Not):
        inner = t.child
        if isinstance(inner, Atom):
            return [(TRUE, None)] if inner.name not in label else []
        if isinstance(inner, Always):
            # !G x == !x | X !G x: fulfil the eventuality now or defer it.
            options = []
            fulfil = _negate_normal(progress(inner.child, label))
            if fulfil != FALSE:
                options.append((fulfil, t))
            options.append((t, None))
            return options
        nxt = _negate_normal(progress(inner, label))
        return [] if nxt == FALSE else [(nxt, None)]
    raise TypeError(f"unexpected clause term {t!r}")


def _successors(clause: Clause, label: frozenset[str]):
    per_term = []
    for t in sorted(clause, key=str):
        options = _term_options(t, label)
        if not options:
            return
        per_term.append(options)
    for combo in itertools.product(*per_term):
        nxt = _gather_and(tuple(f for f, _ in combo))
        if nxt == FALSE:
            continue
        fulfilled = frozenset(e for _, e in combo if e is not None)
        for out in _clauses(nxt):
            yield out, fulfilled


@lru_cache(maxsize=65536)
def satisfiable(f: Formula) -> bool:
    f = normalize(f)
    if f == TRUE:
        return True
    if f == FALSE:
        return False
    support = sorted(atoms_of(f))
    labels = [frozenset(c) for k in range(len(support) + 1)
              for c in itertools.combinations(support, k)]

    nodes: dict[Clause, int] = {}
    order: list[Clause] = []
    edges: list[list[tuple[int, frozenset]]] = []

    def intern(c: Clause) -> int:
        idx = nodes.get(c)
        if idx is None:
            idx = len(order)
            nodes[c] = idx
            order.append(c)
            edges.append([])
        return idx

    frontier = [intern(c) for c in _clauses(f)]
    explored: set[int] = set()
    while frontier:
        idx = frontier.pop()
        if idx in explored:
            continue
        explored.add(idx)
        clause = order[idx]
        if not clause:
            return True  # no obligations remain
        for label in labels:
            for nxt, fulfilled in _successors(clause, label):
                jdx = intern(nxt)
                edges[idx].append((jdx, fulfilled))
                if jdx not in explored:
                    frontier.append(jdx)

    succ = [sorted({j for j, _ in row}) for row in edges]
    for comp in tarjan_sccs(len(order), succ):
        members = set(comp)
        internal = [ful for i in comp for j, ful in edges[i] if j in members]
        if not internal:
            continue
        needed = {t for i in comp for t in order[i] if _is_eventuality(t)}
        fulfilled: set[Formula] = set()
        for ful in internal:
            fulfilled |= ful
        if needed <= fulfilled:
            return True
    return False


def valid(f: Formula) -> bool:
    return not satisfiable(_negate_normal(normalize(f)))
