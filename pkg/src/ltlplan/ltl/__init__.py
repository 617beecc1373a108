from .formula import (
    TRUE,
    FALSE,
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Implies,
    Next,
    Not,
    Or,
    Until,
    atoms_of,
    conj,
    disj,
    normalize,
    progress,
    to_text,
)
from .monitor import (
    MonitorAutomaton,
    MonitorVerdict,
    StateBudgetExceeded,
    StateClass,
    UNDETERMINED,
    VerdictKind,
    build_monitor,
    check_trace,
)
from .oracle import OracleSizeLimit, brute_force_verdict, eval_word
from .parser import LtlSyntaxError, UnknownAtomError, load_spec_file, parse

__all__ = [
    "TRUE", "FALSE", "Always", "And", "Atom", "Eventually", "Formula",
    "Implies", "Next", "Not", "Or", "Until", "atoms_of", "conj", "disj",
    "normalize", "progress", "to_text",
    "MonitorAutomaton", "MonitorVerdict", "StateBudgetExceeded", "StateClass",
    "UNDETERMINED", "VerdictKind", "build_monitor", "check_trace",
    "OracleSizeLimit", "brute_force_verdict", "eval_word",
    "LtlSyntaxError", "UnknownAtomError", "load_spec_file", "parse",
]
