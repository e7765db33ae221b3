"""Workbench for the CLL process calculus.

Submodules:

- :mod:`cll.terms` -- abstract syntax, parser, pretty printer, term metrics
- :mod:`cll.semantics` -- transition relation, inconsistency predicate, LTS fragments
- :mod:`cll.refinement` -- ready-simulation preorders with failure witnesses
- :mod:`cll.axioms` -- normal forms, equational prover, checkable proof traces
- :mod:`cll.testkit` -- random term generation and independent oracles
- :mod:`cll.cli` -- command-line interface
"""

from .terms import (
    TAU,
    ParseError,
    Term,
    bot,
    canonical_compare,
    conj,
    degree,
    disj,
    ext_choice,
    gen_choice,
    gen_disj,
    is_basic,
    nil,
    par,
    parse,
    prefix,
    pretty_print,
    sync_set,
)

__all__ = [
    "TAU",
    "ParseError",
    "Term",
    "bot",
    "canonical_compare",
    "conj",
    "degree",
    "disj",
    "ext_choice",
    "gen_choice",
    "gen_disj",
    "is_basic",
    "nil",
    "par",
    "parse",
    "prefix",
    "pretty_print",
    "sync_set",
]
