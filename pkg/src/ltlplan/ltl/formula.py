"""LTL formula AST over named atomic propositions.

Formulas are immutable trees. `normalize` rewrites derived operators
(implication, eventually) into the core form, pushes negation through
boolean connectives, flattens and sorts conjunction/disjunction sets,
and folds constants. Normal forms are canonical up to syntactic
equality, which is what the monitor uses to identify states.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


@dataclass(frozen=True)
class Formula:
    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    children: tuple[Formula, ...]  # flattened, deduped, sorted in normal form


@dataclass(frozen=True)
class Or(Formula):
    children: tuple[Formula, ...]


@dataclass(frozen=True)
class Next(Formula):
    child: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    child: Formula


@dataclass(frozen=True)
class Always(Formula):
    child: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


TRUE = TrueF()
FALSE = FalseF()

# Precedence levels used when printing (higher binds tighter).
_PREC_IMPLIES = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_UNTIL = 4
_PREC_UNARY = 5
_PREC_ATOM = 6


def conj(*parts: Formula) -> Formula:
    return normalize(And(tuple(parts)))


def disj(*parts: Formula) -> Formula:
    return normalize(Or(tuple(parts)))


def atoms_of(f: Formula) -> frozenset[str]:
    """Set of atom names occurring in the formula."""
    if isinstance(f, Atom):
        return frozenset((f.name,))
    if isinstance(f, (TrueF, FalseF)):
        return frozenset()
    if isinstance(f, (Not, Next, Eventually, Always)):
        return atoms_of(f.child)
    if isinstance(f, (Until, Implies)):
        return atoms_of(f.left) | atoms_of(f.right)
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for c in f.children:
            out |= atoms_of(c)
        return out
    raise TypeError(f"unknown formula node {f!r}")


def _sort_key(f: Formula) -> str:
    return to_text(f)


def _negate_normal(f: Formula) -> Formula:
    """Negation of an already-normalized formula, in normal form."""
    if isinstance(f, TrueF):
        return FALSE
    if isinstance(f, FalseF):
        return TRUE
    if isinstance(f, Not):
        return f.child
    if isinstance(f, And):
        return _gather_or(tuple(_negate_normal(c) for c in f.children))
    if isinstance(f, Or):
        return _gather_and(tuple(_negate_normal(c) for c in f.children))
    # Negation stays in front of atoms and of temporal operators; the
    # monitor progresses through it without needing a Release dual.
    return Not(f)


def _gather_and(parts: tuple[Formula, ...]) -> Formula:
    """Conjunction in disjunctive normal form over temporal/atomic terms.

    Disjunctive children are distributed so the boolean layer of every
    normal form is an Or of Ands of plain terms. This keeps progression
    closures finite: states stay inside the DNF lattice over the original
    formula's subterms instead of nesting And(Or(And(...))) without bound.
    """
    terms: dict[Formula, None] = {}
    or_blocks: list[tuple[Formula, ...]] = []
    for p in parts:
        if isinstance(p, FalseF):
            return FALSE
        if isinstance(p, TrueF):
            continue
        if isinstance(p, And):
            for c in p.children:
                terms[c] = None
        elif isinstance(p, Or):
            or_blocks.append(p.children)
        else:
            terms[p] = None
    for m in terms:
        if isinstance(m, Not) and m.child in terms:
            return FALSE
    if or_blocks:
        base = tuple(terms)
        clauses = [base]
        for block in or_blocks:
            clauses = [prefix + (choice,) for prefix in clauses for choice in block]
        return _gather_or(tuple(_gather_and(clause) for clause in clauses))
    if not terms:
        return TRUE
    if len(terms) == 1:
        return next(iter(terms))
    return And(tuple(sorted(terms, key=_sort_key)))


def _clause_terms(m: Formula) -> frozenset[Formula]:
    return frozenset(m.children) if isinstance(m, And) else frozenset((m,))


def _gather_or(parts: tuple[Formula, ...]) -> Formula:
    members: dict[Formula, None] = {}
    for p in parts:
        if isinstance(p, TrueF):
            return TRUE
        if isinstance(p, FalseF):
            continue
        if isinstance(p, Or):
            for c in p.children:
                members[c] = None
        else:
            members[p] = None
    for m in members:
        if isinstance(m, Not) and m.child in members:
            return TRUE
    # Absorption: drop any clause that is a superset of another clause.
    if len(members) > 1:
        sets = {m: _clause_terms(m) for m in members}
        kept = [m for m in members
                if not any(n is not m and sets[n] < sets[m] for n in members)]
        members = dict.fromkeys(kept)
    if not members:
        return FALSE
    if len(members) == 1:
        return next(iter(members))
    return Or(tuple(sorted(members, key=_sort_key)))


@lru_cache(maxsize=None)
def normalize(f: Formula) -> Formula:
    """Canonical normal form; idempotent."""
    if isinstance(f, (TrueF, FalseF, Atom)):
        return f
    if isinstance(f, Implies):
        return _gather_or((_negate_normal(normalize(f.left)), normalize(f.right)))
    if isinstance(f, Eventually):
        return normalize(Until(TRUE, f.child))
    if isinstance(f, Not):
        return _negate_normal(normalize(f.child))
    if isinstance(f, And):
        return _gather_and(tuple(normalize(c) for c in f.children))
    if isinstance(f, Or):
        return _gather_or(tuple(normalize(c) for c in f.children))
    if isinstance(f, Next):
        c = normalize(f.child)
        if isinstance(c, (TrueF, FalseF)):
            return c
        return Next(c)
    if isinstance(f, Until):
        left = normalize(f.left)
        right = normalize(f.right)
        if isinstance(right, (TrueF, FalseF)):
            return right
        if isinstance(left, FalseF):
            return right
        return Until(left, right)
    if isinstance(f, Always):
        c = normalize(f.child)
        if isinstance(c, (TrueF, FalseF)):
            return c
        if isinstance(c, Always):
            return c
        return Always(c)
    raise TypeError(f"unknown formula node {f!r}")


def progress(f: Formula, label: frozenset[str]) -> Formula:
    """Obligation on the remaining suffix given that `label` holds now.

    `f` must be normalized; the result is normalized.
    """
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, Atom):
        return TRUE if f.name in label else FALSE
    if isinstance(f, Not):
        return _negate_normal(progress(f.child, label))
    if isinstance(f, And):
        return _gather_and(tuple(progress(c, label) for c in f.children))
    if isinstance(f, Or):
        return _gather_or(tuple(progress(c, label) for c in f.children))
    if isinstance(f, Next):
        return f.child
    if isinstance(f, Until):
        now = progress(f.right, label)
        if isinstance(now, TrueF):
            return TRUE
        keep = progress(f.left, label)
        if isinstance(keep, FalseF):
            return now
        return _gather_or((now, _gather_and((keep, f))))
    if isinstance(f, Always):
        now = progress(f.child, label)
        if isinstance(now, FalseF):
            return FALSE
        return _gather_and((now, f))
    raise TypeError(f"progress on non-normalized node {f!r}")


def to_text(f: Formula, parent_prec: int = 0) -> str:
    """Concrete-syntax rendering; reparsing yields the same normal form."""
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "!" + to_text(f.child, _PREC_UNARY)
    if isinstance(f, Next):
        return "X " + to_text(f.child, _PREC_UNARY)
    if isinstance(f, Eventually):
        return "F " + to_text(f.child, _PREC_UNARY)
    if isinstance(f, Always):
        return "G " + to_text(f.child, _PREC_UNARY)
    if isinstance(f, Until):
        if isinstance(f.left, TrueF):
            text = "F " + to_text(f.right, _PREC_UNARY)
            return text if parent_prec <= _PREC_UNARY else "(" + text + ")"
        text = to_text(f.left, _PREC_UNTIL + 1) + " U " + to_text(f.right, _PREC_UNTIL)
        return text if parent_prec <= _PREC_UNTIL else "(" + text + ")"
    if isinstance(f, And):
        text = " & ".join(to_text(c, _PREC_AND + 1) for c in f.children)
        return text if parent_prec <= _PREC_AND else "(" + text + ")"
    if isinstance(f, Or):
        text = " | ".join(to_text(c, _PREC_OR + 1) for c in f.children)
        return text if parent_prec <= _PREC_OR else "(" + text + ")"
    if isinstance(f, Implies):
        text = to_text(f.left, _PREC_IMPLIES + 1) + " -> " + to_text(f.right, _PREC_IMPLIES)
        return text if parent_prec <= _PREC_IMPLIES else "(" + text + ")"
    raise TypeError(f"unknown formula node {f!r}")
