"""Axiom schemas of the equational system, instantiable and checkable.

Each schema maps a binding of its variables (terms, a visible action, a sync
set, or the lengths of summand lists) to a literal (in)equation and verifies
its side conditions.  The same table drives both proof construction and the
independent trace validator, so a trace step is valid exactly when its
recorded conclusion is the literal instance of the named schema under the
recorded bindings.

Schema families:

- EC1-EC5: external choice is commutative, associative, idempotent, has unit
  0 and is absorbed by bottom.
- DI1-DI5: disjunction likewise (unit bottom), plus introduction x <= x \\/ y.
- CO1-CO4: conjunction commutative, associative, idempotent, absorbs bottom.
- DS1-DS3: choice, conjunction and parallel distribute over disjunction.
- DS4: a.(x \\/ y) <= a.x [] a.y for basic x, y.
- PR1/PR2: a.bot = bot and tau.x = x.
- PA1/PA2: parallel commutative, absorbs bottom.
- ECC1-ECC3: conjunctions of general choices: mismatched prefix sets give
  bottom; summandwise conjunction bounds the conjunction of choices, with the
  converse requiring prefix injectivity.
- EXP1/EXP2: the expansion of a parallel composition of general choices into
  its interleavings and synchronizations, for basic summand bodies.
"""

from __future__ import annotations

from typing import Callable

from ..terms import (
    TAU, Term, bot, conj, disj, ext_choice, gen_choice, is_action_name, nil,
    par, prefix,
)


class SchemaError(ValueError):
    """A schema instantiation with bad bindings or a failed side condition."""


Binding = dict[str, object]


def _term(bindings: Binding, name: str) -> Term:
    value = bindings.get(name)
    if not isinstance(value, Term):
        raise SchemaError(f"binding {name} must be a term")
    return value


def _action(bindings: Binding, name: str, *, allow_tau: bool = False) -> str:
    value = bindings.get(name)
    if not isinstance(value, str) or not (
        is_action_name(value) or (allow_tau and value == TAU)
    ):
        raise SchemaError(f"binding {name} must be a visible action name")
    return value


def _count(bindings: Binding, name: str) -> int:
    value = bindings.get(name)
    if not isinstance(value, int) or value < 0:
        raise SchemaError(f"binding {name} must be a nonnegative count")
    return value


def _sync(bindings: Binding, name: str = "A") -> frozenset[str]:
    value = bindings.get(name)
    if not isinstance(value, frozenset) or any(
        not (isinstance(a, str) and is_action_name(a)) for a in value
    ):
        raise SchemaError(f"binding {name} must be a set of visible action names")
    return value


def _prefixed_list(bindings: Binding, count_name: str, act_prefix: str,
                   term_prefix: str) -> list[tuple[str, Term]]:
    n = _count(bindings, count_name)
    return [
        (_action(bindings, f"{act_prefix}{i}"), _term(bindings, f"{term_prefix}{i}"))
        for i in range(n)
    ]


def _gec(pairs: list[tuple[str, Term]]) -> Term:
    return gen_choice(prefix(a, t) for a, t in pairs)


def _require_basic(pairs: list[tuple[str, Term]], what: str) -> None:
    for _, t in pairs:
        if not t.is_basic:
            raise SchemaError(f"{what} must be basic process terms")


class Schema:
    """One axiom schema: name, eq/le, and how to build its instance."""

    def __init__(self, name: str, kind: str,
                 build: Callable[[Binding], tuple[Term, Term]]):
        self.name = name
        self.kind = kind  # "eq" or "le"
        self.build = build

    def instantiate(self, bindings: Binding) -> tuple[Term, Term]:
        """The literal (lhs, rhs) of this schema instance; side conditions
        are enforced, raising SchemaError."""
        return self.build(bindings)


def _xy(build):
    return lambda b: build(_term(b, "x"), _term(b, "y"))


def _xyz(build):
    return lambda b: build(_term(b, "x"), _term(b, "y"), _term(b, "z"))


def _x(build):
    return lambda b: build(_term(b, "x"))


def _ds4(b: Binding) -> tuple[Term, Term]:
    a = _action(b, "a")
    x, y = _term(b, "x"), _term(b, "y")
    if not (x.is_basic and y.is_basic):
        raise SchemaError("DS4 requires basic operands")
    return prefix(a, disj(x, y)), ext_choice(prefix(a, x), prefix(a, y))


def _pr1(b: Binding) -> tuple[Term, Term]:
    a = _action(b, "a")
    return prefix(a, bot()), bot()


def _pr2(b: Binding) -> tuple[Term, Term]:
    return prefix(TAU, _term(b, "x")), _term(b, "x")


def _ds3(b: Binding) -> tuple[Term, Term]:
    sync = _sync(b)
    x, y, z = _term(b, "x"), _term(b, "y"), _term(b, "z")
    return par(x, disj(y, z), sync), disj(par(x, y, sync), par(x, z, sync))


def _pa1(b: Binding) -> tuple[Term, Term]:
    sync = _sync(b)
    return par(_term(b, "x"), _term(b, "y"), sync), par(_term(b, "y"), _term(b, "x"), sync)


def _pa2(b: Binding) -> tuple[Term, Term]:
    sync = _sync(b)
    return par(_term(b, "x"), bot(), sync), bot()


def _ecc1(b: Binding) -> tuple[Term, Term]:
    left = _prefixed_list(b, "n", "a", "x")
    right = _prefixed_list(b, "m", "b", "y")
    if {a for a, _ in left} == {a for a, _ in right}:
        raise SchemaError("ECC1 requires the prefix sets to differ")
    return conj(_gec(left), _gec(right)), bot()


def _ecc_shared(b: Binding) -> tuple[Term, Term]:
    """(summandwise conjunction, conjunction of the two choices)."""
    n = _count(b, "n")
    pairs = [
        (_action(b, f"a{i}"), _term(b, f"x{i}"), _term(b, f"y{i}"))
        for i in range(n)
    ]
    merged = _gec([(a, conj(x, y)) for a, x, y in pairs])
    lhs = _gec([(a, x) for a, x, _ in pairs])
    rhs = _gec([(a, y) for a, _, y in pairs])
    return merged, conj(lhs, rhs)


def _ecc2(b: Binding) -> tuple[Term, Term]:
    return _ecc_shared(b)


def _ecc3(b: Binding) -> tuple[Term, Term]:
    merged, conjunction = _ecc_shared(b)
    actions = [b[f"a{i}"] for i in range(_count(b, "n"))]
    if len(set(actions)) != len(actions):
        raise SchemaError("ECC3 requires a choice injective in prefixes")
    return conjunction, merged


def _expansion(b: Binding) -> tuple[Term, Term]:
    """(parallel of general choices, its expansion) with basic bodies."""
    sync = _sync(b)
    left = _prefixed_list(b, "n", "a", "x")
    right = _prefixed_list(b, "m", "b", "y")
    _require_basic(left, "expansion bodies")
    _require_basic(right, "expansion bodies")
    lhs = par(_gec(left), _gec(right), sync)
    choice_l, choice_r = _gec(left), _gec(right)
    group1 = [(a, par(x, choice_r, sync)) for a, x in left if a not in sync]
    group2 = [(bb, par(choice_l, y, sync)) for bb, y in right if bb not in sync]
    group3 = [
        (a, par(x, y, sync))
        for a, x in left
        if a in sync
        for bb, y in right
        if bb == a
    ]
    rhs = ext_choice(ext_choice(_gec(group1), _gec(group2)), _gec(group3))
    return lhs, rhs


def _exp1(b: Binding) -> tuple[Term, Term]:
    return _expansion(b)


def _exp2(b: Binding) -> tuple[Term, Term]:
    lhs, rhs = _expansion(b)
    return rhs, lhs


AXIOM_SCHEMAS: dict[str, Schema] = {
    s.name: s
    for s in (
        Schema("EC1", "eq", _xy(lambda x, y: (ext_choice(x, y), ext_choice(y, x)))),
        Schema("EC2", "eq", _xyz(lambda x, y, z: (
            ext_choice(ext_choice(x, y), z), ext_choice(x, ext_choice(y, z))))),
        Schema("EC3", "eq", _x(lambda x: (ext_choice(x, x), x))),
        Schema("EC4", "eq", _x(lambda x: (ext_choice(x, nil()), x))),
        Schema("EC5", "eq", _x(lambda x: (ext_choice(x, bot()), bot()))),
        Schema("DI1", "eq", _xy(lambda x, y: (disj(x, y), disj(y, x)))),
        Schema("DI2", "eq", _xyz(lambda x, y, z: (
            disj(x, disj(y, z)), disj(disj(x, y), z)))),
        Schema("DI3", "eq", _x(lambda x: (disj(x, x), x))),
        Schema("DI4", "eq", _x(lambda x: (disj(x, bot()), x))),
        Schema("DI5", "le", _xy(lambda x, y: (x, disj(x, y)))),
        Schema("CO1", "eq", _xy(lambda x, y: (conj(x, y), conj(y, x)))),
        Schema("CO2", "eq", _xyz(lambda x, y, z: (
            conj(conj(x, y), z), conj(x, conj(y, z))))),
        Schema("CO3", "eq", _x(lambda x: (conj(x, x), x))),
        Schema("CO4", "eq", _x(lambda x: (conj(x, bot()), bot()))),
        Schema("DS1", "le", _xyz(lambda x, y, z: (
            ext_choice(x, disj(y, z)), disj(ext_choice(x, y), ext_choice(x, z))))),
        Schema("DS2", "le", _xyz(lambda x, y, z: (
            conj(x, disj(y, z)), disj(conj(x, y), conj(x, z))))),
        Schema("DS3", "le", _ds3),
        Schema("DS4", "le", _ds4),
        Schema("PR1", "eq", _pr1),
        Schema("PR2", "eq", _pr2),
        Schema("PA1", "eq", _pa1),
        Schema("PA2", "eq", _pa2),
        Schema("ECC1", "eq", _ecc1),
        Schema("ECC2", "le", _ecc2),
        Schema("ECC3", "le", _ecc3),
        Schema("EXP1", "le", _exp1),
        Schema("EXP2", "le", _exp2),
    )
}

INFERENCE_RULES = ("REF", "TRANS", "CONTEXT")

RULE_NAMES = tuple(AXIOM_SCHEMAS) + INFERENCE_RULES
