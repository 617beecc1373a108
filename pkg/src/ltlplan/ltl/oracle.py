"""Brute-force bounded-semantics oracle used to cross-check the monitor.

A finite prefix is satisfied (violated) when every considered extension
satisfies (falsifies) the formula. "Every extension" is approximated by
all suffixes up to `suffix_depth` over the formula's support alphabet,
each continued with every constant-label stabilization. Distinguishing
genuinely oscillating futures needs more operator nesting than the
supported shapes use, so the approximation is exact here.
"""

from __future__ import annotations

import itertools

from .formula import (
    Always,
    And,
    Atom,
    FalseF,
    Formula,
    Next,
    Not,
    Or,
    TrueF,
    Until,
    atoms_of,
    normalize,
)
from .monitor import MonitorVerdict, VerdictKind, UNDETERMINED

MAX_ATOMS = 4
MAX_TOTAL_LENGTH = 10


class OracleSizeLimit(ValueError):
    pass


def _eval_const(f: Formula, tail: frozenset) -> bool:
    """Value of `f` on the word that repeats one constant label forever."""
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Atom):
        return f.name in tail
    if isinstance(f, Not):
        return not _eval_const(f.child, tail)
    if isinstance(f, And):
        return all(_eval_const(c, tail) for c in f.children)
    if isinstance(f, Or):
        return any(_eval_const(c, tail) for c in f.children)
    if isinstance(f, Next):
        return _eval_const(f.child, tail)
    if isinstance(f, Until):
        return _eval_const(f.right, tail)
    if isinstance(f, Always):
        return _eval_const(f.child, tail)
    raise TypeError(f"non-normalized node {f!r}")


def eval_word(f: Formula, word: list[frozenset[str]], i: int,
              tail: frozenset) -> bool:
    """Standard LTL semantics on `word` extended by a constant tail."""
    if i >= len(word):
        return _eval_const(f, tail)
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Atom):
        return f.name in word[i]
    if isinstance(f, Not):
        return not eval_word(f.child, word, i, tail)
    if isinstance(f, And):
        return all(eval_word(c, word, i, tail) for c in f.children)
    if isinstance(f, Or):
        return any(eval_word(c, word, i, tail) for c in f.children)
    if isinstance(f, Next):
        return eval_word(f.child, word, i + 1, tail)
    if isinstance(f, Until):
        for j in range(i, len(word)):
            if eval_word(f.right, word, j, tail):
                return True
            if not eval_word(f.left, word, j, tail):
                return False
        return _eval_const(f.right, tail)
    if isinstance(f, Always):
        return all(eval_word(f.child, word, j, tail) for j in range(i, len(word))) \
            and _eval_const(f.child, tail)
    raise TypeError(f"non-normalized node {f!r}")


def _extension_outcomes(f: Formula, trace: list[frozenset[str]], suffix_depth: int):
    support = sorted(atoms_of(f))
    label_space = [frozenset(combo)
                   for k in range(len(support) + 1)
                   for combo in itertools.combinations(support, k)]
    for depth in range(suffix_depth + 1):
        for suffix in itertools.product(label_space, repeat=depth):
            word = trace + list(suffix)
            for tail in label_space:
                yield eval_word(f, word, 0, tail)


def _determined(f: Formula, trace: list[frozenset[str]], suffix_depth: int) -> VerdictKind:
    outcomes = set()
    for value in _extension_outcomes(f, trace, suffix_depth):
        outcomes.add(value)
        if len(outcomes) == 2:
            return VerdictKind.UNDETERMINED
    return VerdictKind.SATISFIED if outcomes == {True} else VerdictKind.VIOLATED


def brute_force_verdict(f: Formula, trace: list[frozenset[str]],
                        suffix_depth: int) -> MonitorVerdict:
    """Three-valued verdict by exhaustive suffix enumeration.

    The step index is the length of the shortest prefix that is already
    determined (the same depth bound is applied to each prefix).
    """
    f = normalize(f)
    if len(atoms_of(f)) > MAX_ATOMS:
        raise OracleSizeLimit(f"formula has more than {MAX_ATOMS} atoms")
    if len(trace) + suffix_depth > MAX_TOTAL_LENGTH:
        raise OracleSizeLimit(f"trace plus suffix depth exceeds {MAX_TOTAL_LENGTH}")
    kind = _determined(f, list(trace), suffix_depth)
    if kind is VerdictKind.UNDETERMINED:
        return UNDETERMINED
    for k in range(len(trace) + 1):
        if _determined(f, list(trace[:k]), suffix_depth) is kind:
            return MonitorVerdict(kind, max(0, k - 1))
    return MonitorVerdict(kind, len(trace) - 1)
