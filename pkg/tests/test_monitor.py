import pytest
from hypothesis import given, settings, strategies as st

from ltlplan.ltl import (
    FALSE,
    TRUE,
    Always,
    Atom,
    Eventually,
    StateBudgetExceeded,
    StateClass,
    VerdictKind,
    build_monitor,
    check_trace,
    normalize,
    parse,
)
from strategies import formulas, labels

P = Atom("p")
AP = frozenset({"p", "q"})


def lbl(*names):
    return frozenset(names)


def test_always_p_has_two_states_neutral_and_rejecting():
    m = build_monitor(Always(P), {"p"})
    assert sorted(map(str, m.states)) == ["G p", "false"]
    by_formula = {str(f): m.classes[i] for i, f in enumerate(m.states)}
    assert by_formula["G p"] is StateClass.NEUTRAL
    assert by_formula["false"] is StateClass.REJECTING_TRAP


def test_eventually_p_reaches_accepting_trap():
    m = build_monitor(Eventually(P), {"p"})
    by_formula = {str(f): m.classes[i] for i, f in enumerate(m.states)}
    assert by_formula == {"F p": StateClass.NEUTRAL, "true": StateClass.ACCEPTING_TRAP}


def test_true_is_a_single_accepting_state():
    m = build_monitor(TRUE, {"p"})
    assert len(m.states) == 1
    assert m.classes[0] is StateClass.ACCEPTING_TRAP


def test_budget_exceeded_signals_intractable_formula():
    with pytest.raises(StateBudgetExceeded):
        build_monitor(Always(P), {"p"}, state_budget=1)


def test_exit_only_tautology_state_marked_accepting():
    # X p | X !p has no syntactic complement pair but every transition
    # lands in `true`, so SCC extension must mark it accepting.
    f = parse("X p | X !p", {"p"})
    m = build_monitor(f, {"p"})
    assert m.classes[m.initial] is StateClass.ACCEPTING_TRAP


def test_check_trace_safety_violation_index():
    m = build_monitor(Always(P), {"p"})
    v = check_trace(m, [lbl("p"), lbl("p"), lbl()])
    assert v.kind is VerdictKind.VIOLATED
    assert v.step == 2


def test_check_trace_cosafety_satisfaction_index():
    m = build_monitor(Eventually(P), {"p"})
    v = check_trace(m, [lbl(), lbl("p")])
    assert v.kind is VerdictKind.SATISFIED
    assert v.step == 1


def test_check_trace_undetermined_on_pending_obligation():
    m = build_monitor(parse("p U q", AP), AP)
    assert not check_trace(m, [lbl("p"), lbl("p")]).determined


@given(formulas(max_depth=3), st.lists(labels(), max_size=6))
@settings(max_examples=300)
def test_trap_states_are_absorbing(f, trace):
    m = build_monitor(normalize(f), {"p", "q", "r"})
    state = m.initial
    seen_class = None
    for label in trace:
        state = m.step(state, m.label_mask(label))
        cls = m.state_class(state)
        if seen_class in (StateClass.ACCEPTING_TRAP, StateClass.REJECTING_TRAP):
            assert cls is seen_class
        seen_class = cls


@given(formulas(max_depth=3), st.lists(labels(), max_size=5), st.lists(labels(), max_size=3))
@settings(max_examples=300)
def test_determined_verdicts_are_monotone_under_extension(f, trace, extra):
    m = build_monitor(normalize(f), {"p", "q", "r"})
    v = check_trace(m, trace)
    if v.determined:
        extended = check_trace(m, trace + extra)
        assert extended.kind is v.kind
        assert extended.step == v.step


def test_transition_table_is_total():
    m = build_monitor(parse("G (p -> p U q)", AP), AP)
    n_labels = 1 << len(m.support)
    for row in m.transitions:
        assert len(row) == n_labels
        assert all(0 <= t < len(m.states) for t in row)


def test_check_trace_is_deterministic():
    m = build_monitor(parse("G (p -> p U q)", AP), AP)
    trace = [lbl("p"), lbl("p", "q"), lbl(), lbl("p")]
    assert check_trace(m, trace) == check_trace(m, trace)
