"""obd: decide first-order statements about inhomogeneous Beatty sequences.

The pipeline: exact quadratic arithmetic -> Ostrowski numeration ->
synchronized finite automata -> a Walnut-style first-order DSL compiled
to automata, plus a CLI and scripted reproductions of the key identities.
"""
from .quadratic import QuadraticReal, PeriodicCF, ConvergentTable, cf_value, cf_expand, period_rotate
from .numeration import NumerationSystem, DigitString
from .automata import Automaton
from .regexlang import RegexError, regex_compile
from .relations import (
    BeattySpec,
    affine_compose,
    beatty_sync,
    canonical_recognizer,
    comparison,
    fibonacci_word,
    floor_gamma_sync,
    inequality_relation,
    linear_relation,
    shift_relation,
)
from .logic import (
    Environment,
    LogicError,
    StoredPredicate,
    compile_formula,
    def_predicate,
    eval_sentence,
    free_variables,
    parse_formula,
)

__all__ = [
    "QuadraticReal", "PeriodicCF", "ConvergentTable", "cf_value", "cf_expand",
    "period_rotate", "NumerationSystem", "DigitString", "Automaton",
    "BeattySpec", "affine_compose", "beatty_sync", "canonical_recognizer",
    "comparison", "fibonacci_word", "floor_gamma_sync", "inequality_relation",
    "linear_relation", "shift_relation", "RegexError", "regex_compile",
    "Environment", "LogicError", "StoredPredicate", "compile_formula",
    "def_predicate", "eval_sentence", "free_variables", "parse_formula",
]
