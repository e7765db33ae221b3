"""Algebraic law catalog: randomized checks for every refinement law.

Each law is a named callable that draws one random instantiation (respecting
the law's stability or basicness side conditions) and verifies the claimed
refinement or equivalence, returning None on success and a description of
the violating instance otherwise.  The same catalog backs the command-line
selftest and the acceptance suite.

``AXIOM_CHECKS`` does the analogous job for the proof system: one random
ground instance of a schema per call, validated against the refinement
checker (equations both ways, inequations one way).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .refinement import RefinementChecker
from .terms import (
    TAU, Term, bot, conj, disj, ext_choice, gen_choice, gen_disj, nil, par,
    prefix, pretty_print,
)
from .testkit import sample_term


@dataclass
class LawEnv:
    """Sampling context shared by all law checks."""

    checker: RefinementChecker = field(default_factory=RefinementChecker)
    alphabet: tuple[str, ...] = ("a", "b", "c")
    degree: int = 5

    def sample(self, rng: random.Random, *, stable: bool = False,
               basic: bool = False, degree: int | None = None) -> Term:
        return sample_term(rng, degree or self.degree, alphabet=self.alphabet,
                           basic=basic, stable=stable)

    def action(self, rng: random.Random) -> str:
        return rng.choice(self.alphabet)

    def action_or_tau(self, rng: random.Random) -> str:
        return rng.choice(self.alphabet + (TAU,))

    def sync(self, rng: random.Random) -> frozenset[str]:
        return frozenset(a for a in self.alphabet if rng.random() < 0.45)


Check = Callable[[random.Random, LawEnv], "str | None"]


def _fail(name: str, *terms: Term) -> str:
    return f"{name}: " + "  ||  ".join(pretty_print(t) for t in terms)


def _eq(env: LawEnv, name: str, lhs: Term, rhs: Term) -> str | None:
    return None if env.checker.rs_equiv(lhs, rhs) else _fail(name, lhs, rhs)


def _stable_eq(env: LawEnv, name: str, lhs: Term, rhs: Term) -> str | None:
    return None if env.checker.stable_rs_equiv(lhs, rhs) else _fail(name, lhs, rhs)


def _le(env: LawEnv, name: str, lhs: Term, rhs: Term) -> str | None:
    return None if env.checker.ready_sim_preorder(lhs, rhs).holds \
        else _fail(name, lhs, rhs)


# --- prefix -----------------------------------------------------------------

def prefix_bot(rng, env):
    a = env.action(rng)
    return _eq(env, "prefix-bot", prefix(a, bot()), bot())


def prefix_tau(rng, env):
    t = env.sample(rng)
    return _eq(env, "prefix-tau", prefix(TAU, t), t)


# --- disjunction -------------------------------------------------------------

def disj_comm(rng, env):
    t, s = env.sample(rng), env.sample(rng)
    return _eq(env, "disj-comm", disj(t, s), disj(s, t))


def disj_assoc(rng, env):
    t, s, r = env.sample(rng), env.sample(rng), env.sample(rng)
    return _eq(env, "disj-assoc", disj(disj(t, s), r), disj(t, disj(s, r)))


def disj_idem(rng, env):
    t = env.sample(rng)
    return _eq(env, "disj-idem", disj(t, t), t)


def disj_bot(rng, env):
    t = env.sample(rng)
    return _eq(env, "disj-bot", disj(t, bot()), t)


def disj_intro(rng, env):
    t, s = env.sample(rng), env.sample(rng)
    return _le(env, "disj-intro", t, disj(t, s))


# --- external choice -----------------------------------------------------------

def ec_comm_stable(rng, env):
    t, s = env.sample(rng, stable=True), env.sample(rng, stable=True)
    return _stable_eq(env, "ec-comm-stable", ext_choice(t, s), ext_choice(s, t))


def ec_comm(rng, env):
    t, s = env.sample(rng), env.sample(rng)
    return _eq(env, "ec-comm", ext_choice(t, s), ext_choice(s, t))


def ec_assoc_stable(rng, env):
    t, s, r = (env.sample(rng, stable=True) for _ in range(3))
    return _stable_eq(env, "ec-assoc-stable",
                      ext_choice(ext_choice(t, s), r), ext_choice(t, ext_choice(s, r)))


def ec_assoc(rng, env):
    t, s, r = env.sample(rng), env.sample(rng), env.sample(rng)
    return _eq(env, "ec-assoc",
               ext_choice(ext_choice(t, s), r), ext_choice(t, ext_choice(s, r)))


def ec_idem_stable(rng, env):
    t = env.sample(rng, stable=True)
    return _stable_eq(env, "ec-idem-stable", ext_choice(t, t), t)


def ec_idem(rng, env):
    t = env.sample(rng)
    return _eq(env, "ec-idem", ext_choice(t, t), t)


def ec_bot(rng, env):
    t = env.sample(rng)
    return _eq(env, "ec-bot", ext_choice(t, bot()), bot())


def ec_zero_stable(rng, env):
    t = env.sample(rng, stable=True)
    return _stable_eq(env, "ec-zero-stable", ext_choice(t, nil()), t)


def ec_zero(rng, env):
    t = env.sample(rng)
    return _eq(env, "ec-zero", ext_choice(t, nil()), t)


# --- conjunction ----------------------------------------------------------------

def conj_comm_stable(rng, env):
    t, s = env.sample(rng, stable=True), env.sample(rng, stable=True)
    return _stable_eq(env, "conj-comm-stable", conj(t, s), conj(s, t))


def conj_comm(rng, env):
    t, s = env.sample(rng), env.sample(rng)
    return _eq(env, "conj-comm", conj(t, s), conj(s, t))


def conj_assoc_stable(rng, env):
    t, s, r = (env.sample(rng, stable=True) for _ in range(3))
    return _stable_eq(env, "conj-assoc-stable",
                      conj(conj(t, s), r), conj(t, conj(s, r)))


def conj_assoc(rng, env):
    t, s, r = env.sample(rng), env.sample(rng), env.sample(rng)
    return _eq(env, "conj-assoc", conj(conj(t, s), r), conj(t, conj(s, r)))


def conj_idem_stable(rng, env):
    t = env.sample(rng, stable=True)
    return _stable_eq(env, "conj-idem-stable", conj(t, t), t)


def conj_idem(rng, env):
    t = env.sample(rng)
    return _eq(env, "conj-idem", conj(t, t), t)


def conj_bot(rng, env):
    t = env.sample(rng)
    return _eq(env, "conj-bot", conj(t, bot()), bot())


# --- parallel --------------------------------------------------------------------

def par_comm_stable(rng, env):
    sync = env.sync(rng)
    t, s = env.sample(rng, stable=True), env.sample(rng, stable=True)
    return _stable_eq(env, "par-comm-stable", par(t, s, sync), par(s, t, sync))


def par_comm(rng, env):
    sync = env.sync(rng)
    t, s = env.sample(rng), env.sample(rng)
    return _eq(env, "par-comm", par(t, s, sync), par(s, t, sync))


def par_bot(rng, env):
    sync = env.sync(rng)
    t = env.sample(rng)
    return _eq(env, "par-bot", par(t, bot(), sync), bot())


def par_zero(rng, env):
    sync = env.sync(rng)
    return _eq(env, "par-zero", par(nil(), nil(), sync), nil())


# --- congruence and meet -----------------------------------------------------------

def _refining_pair(rng, env) -> tuple[Term, Term]:
    """A pair (t1, t2) with t1 below t2 in the preorder."""
    t = env.sample(rng)
    style = rng.randrange(4)
    if style == 0:
        return t, t
    if style == 1:
        return t, disj(t, env.sample(rng))
    if style == 2:
        return conj(t, env.sample(rng)), t
    s = env.sample(rng)
    if env.checker.ready_sim_preorder(t, s).holds:
        return t, s
    return t, disj(t, s)


def precongruence(rng, env):
    t1, t2 = _refining_pair(rng, env)
    s1, s2 = _refining_pair(rng, env)
    a = env.action_or_tau(rng)
    if not env.checker.ready_sim_preorder(prefix(a, t1), prefix(a, t2)).holds:
        return _fail("precongruence-prefix", prefix(a, t1), prefix(a, t2))
    sync = env.sync(rng)
    combos = (
        (ext_choice(t1, s1), ext_choice(t2, s2)),
        (conj(t1, s1), conj(t2, s2)),
        (disj(t1, s1), disj(t2, s2)),
        (par(t1, s1, sync), par(t2, s2, sync)),
    )
    for lhs, rhs in combos:
        if not env.checker.ready_sim_preorder(lhs, rhs).holds:
            return _fail("precongruence", lhs, rhs)
    return None


def conjunction_as_meet(rng, env):
    t1, t2, t3 = env.sample(rng), env.sample(rng), env.sample(rng)
    into_meet = env.checker.ready_sim_preorder(t1, conj(t2, t3)).holds
    both = (env.checker.ready_sim_preorder(t1, t2).holds
            and env.checker.ready_sim_preorder(t1, t3).holds)
    if into_meet != both:
        return _fail("conjunction-as-meet", t1, t2, t3)
    return None


# --- mixed-operator laws --------------------------------------------------------------

def distributive(rng, env):
    t1, t2, t3 = env.sample(rng), env.sample(rng), env.sample(rng)
    sync = env.sync(rng)
    cases = (
        (ext_choice(t1, disj(t2, t3)), disj(ext_choice(t1, t2), ext_choice(t1, t3))),
        (conj(t1, disj(t2, t3)), disj(conj(t1, t2), conj(t1, t3))),
        (par(t1, disj(t2, t3), sync), disj(par(t1, t2, sync), par(t1, t3, sync))),
    )
    for lhs, rhs in cases:
        if not env.checker.rs_equiv(lhs, rhs):
            return _fail("distributive", lhs, rhs)
    return None


def choice_into_disjunction(rng, env):
    a = env.action_or_tau(rng)
    t1, t2 = env.sample(rng), env.sample(rng)
    return _le(env, "choice-into-disjunction",
               ext_choice(prefix(a, t1), prefix(a, t2)), prefix(a, disj(t1, t2)))


def disjunction_into_choice_iff_uniform(rng, env):
    a = env.action(rng)
    t1, t2 = env.sample(rng), env.sample(rng)
    holds = env.checker.ready_sim_preorder(
        prefix(a, disj(t1, t2)), ext_choice(prefix(a, t1), prefix(a, t2))).holds
    if holds != env.checker.uniform_wrt_f(t1, t2):
        return _fail("disjunction-into-choice-iff-uniform", t1, t2)
    return None


# --- general-choice laws -----------------------------------------------------------------

def _prefixed(rng, env, size: int) -> list[tuple[str, Term]]:
    return [
        (env.action(rng), env.sample(rng, degree=3)) for _ in range(size)
    ]


def _gec(pairs) -> Term:
    return gen_choice(prefix(a, t) for a, t in pairs)


def gec_conj_mismatch(rng, env):
    left = _prefixed(rng, env, rng.randrange(4))
    right = _prefixed(rng, env, rng.randrange(4))
    if {a for a, _ in left} == {a for a, _ in right}:
        extra = env.alphabet[rng.randrange(len(env.alphabet))]
        left = left + [(extra, env.sample(rng, degree=3))]
        if {a for a, _ in left} == {a for a, _ in right}:
            right = [(a, t) for a, t in right if a != extra]
    return _eq(env, "gec-conj-mismatch", conj(_gec(left), _gec(right)), bot())


def gec_conj_pairs(rng, env):
    actions = [env.action(rng) for _ in range(rng.randrange(1, 4))]
    left = [(a, env.sample(rng, degree=3)) for a in actions]
    right = [(a, env.sample(rng, degree=3)) for a in rng.sample(actions, len(actions))]
    merged = [
        (a, conj(t, s))
        for a, t in left
        for bb, s in right
        if bb == a
    ]
    return _le(env, "gec-conj-pairs", _gec(merged), conj(_gec(left), _gec(right)))


def gec_conj_pointwise(rng, env):
    actions = [env.action(rng) for _ in range(rng.randrange(4))]
    left = [(a, env.sample(rng, degree=3)) for a in actions]
    right = [(a, env.sample(rng, degree=3)) for a in actions]
    merged = [(a, conj(t, s)) for (a, t), (_, s) in zip(left, right)]
    return _le(env, "gec-conj-pointwise", _gec(merged), conj(_gec(left), _gec(right)))


def gec_conj_injective(rng, env):
    actions = rng.sample(env.alphabet, rng.randrange(len(env.alphabet) + 1))
    left = [(a, env.sample(rng, degree=3)) for a in actions]
    right = [(a, env.sample(rng, degree=3)) for a in actions]
    merged = [(a, conj(t, s)) for (a, t), (_, s) in zip(left, right)]
    return _le(env, "gec-conj-injective", conj(_gec(left), _gec(right)), _gec(merged))


def _expansion_sides(left, right, sync) -> tuple[Term, Term]:
    choice_l, choice_r = _gec(left), _gec(right)
    group1 = [(a, par(t, choice_r, sync)) for a, t in left if a not in sync]
    group2 = [(a, par(choice_l, t, sync)) for a, t in right if a not in sync]
    group3 = [
        (a, par(t, s, sync))
        for a, t in left
        if a in sync
        for bb, s in right
        if bb == a
    ]
    expansion = ext_choice(
        ext_choice(_gec(group1), _gec(group2)), _gec(group3))
    return par(choice_l, choice_r, sync), expansion


def gec_par_expansion(rng, env):
    left = _prefixed(rng, env, rng.randrange(4))
    right = _prefixed(rng, env, rng.randrange(4))
    sync = env.sync(rng)
    parallel, expansion = _expansion_sides(left, right, sync)
    return _le(env, "gec-par-expansion", parallel, expansion)


def gec_par_expansion_converse(rng, env):
    left = _prefixed(rng, env, rng.randrange(4))
    right = _prefixed(rng, env, rng.randrange(4))
    sync = env.sync(rng)
    eng = env.checker.engine
    right_actions = {a for a, _ in right}
    left_actions = {a for a, _ in left}
    left = [
        (a, env.sample(rng, degree=3, basic=True))
        if a in sync and a not in right_actions and eng.is_inconsistent(t) else (a, t)
        for a, t in left
    ]
    right = [
        (a, env.sample(rng, degree=3, basic=True))
        if a in sync and a not in left_actions and eng.is_inconsistent(t) else (a, t)
        for a, t in right
    ]
    parallel, expansion = _expansion_sides(left, right, sync)
    return _le(env, "gec-par-expansion-converse", expansion, parallel)


def basic_terms_consistent(rng, env):
    t = env.sample(rng, basic=True, degree=8)
    if env.checker.engine.is_inconsistent(t):
        return _fail("basic-terms-consistent", t)
    return None


LAWS: tuple[tuple[str, Check], ...] = (
    ("prefix-bot", prefix_bot),
    ("prefix-tau", prefix_tau),
    ("disj-comm", disj_comm),
    ("disj-assoc", disj_assoc),
    ("disj-idem", disj_idem),
    ("disj-bot", disj_bot),
    ("disj-intro", disj_intro),
    ("ec-comm-stable", ec_comm_stable),
    ("ec-comm", ec_comm),
    ("ec-assoc-stable", ec_assoc_stable),
    ("ec-assoc", ec_assoc),
    ("ec-idem-stable", ec_idem_stable),
    ("ec-idem", ec_idem),
    ("ec-bot", ec_bot),
    ("ec-zero-stable", ec_zero_stable),
    ("ec-zero", ec_zero),
    ("conj-comm-stable", conj_comm_stable),
    ("conj-comm", conj_comm),
    ("conj-assoc-stable", conj_assoc_stable),
    ("conj-assoc", conj_assoc),
    ("conj-idem-stable", conj_idem_stable),
    ("conj-idem", conj_idem),
    ("conj-bot", conj_bot),
    ("par-comm-stable", par_comm_stable),
    ("par-comm", par_comm),
    ("par-bot", par_bot),
    ("par-zero", par_zero),
    ("precongruence", precongruence),
    ("conjunction-as-meet", conjunction_as_meet),
    ("distributive", distributive),
    ("choice-into-disjunction", choice_into_disjunction),
    ("disjunction-into-choice-iff-uniform", disjunction_into_choice_iff_uniform),
    ("gec-conj-mismatch", gec_conj_mismatch),
    ("gec-conj-pairs", gec_conj_pairs),
    ("gec-conj-pointwise", gec_conj_pointwise),
    ("gec-conj-injective", gec_conj_injective),
    ("gec-par-expansion", gec_par_expansion),
    ("gec-par-expansion-converse", gec_par_expansion_converse),
    ("basic-terms-consistent", basic_terms_consistent),
)


# --- axiom schema soundness ---------------------------------------------------------

def _axiom_bindings(name: str, rng: random.Random, env: LawEnv) -> dict:
    deg = 4
    sample = lambda **kw: env.sample(rng, degree=deg, **kw)
    if name in ("EC1", "DI1", "CO1", "DI5"):
        return {"x": sample(), "y": sample()}
    if name in ("EC2", "DI2", "CO2", "DS1", "DS2"):
        return {"x": sample(), "y": sample(), "z": sample()}
    if name in ("EC3", "EC4", "EC5", "DI3", "DI4", "CO3", "CO4", "PR2"):
        return {"x": sample()}
    if name == "PR1":
        return {"a": env.action(rng)}
    if name == "DS3":
        return {"x": sample(), "y": sample(), "z": sample(), "A": env.sync(rng)}
    if name == "DS4":
        return {"a": env.action(rng), "x": sample(basic=True), "y": sample(basic=True)}
    if name == "PA1":
        return {"x": sample(), "y": sample(), "A": env.sync(rng)}
    if name == "PA2":
        return {"x": sample(), "A": env.sync(rng)}
    if name == "ECC1":
        while True:
            n, m = rng.randrange(4), rng.randrange(4)
            left = [env.action(rng) for _ in range(n)]
            right = [env.action(rng) for _ in range(m)]
            if set(left) != set(right):
                break
        bind: dict = {"n": n, "m": m}
        for i, a in enumerate(left):
            bind[f"a{i}"] = a
            bind[f"x{i}"] = sample(deg=None) if False else env.sample(rng, degree=3)
        for j, a in enumerate(right):
            bind[f"b{j}"] = a
            bind[f"y{j}"] = env.sample(rng, degree=3)
        return bind
    if name in ("ECC2", "ECC3"):
        if name == "ECC3":
            actions = rng.sample(env.alphabet, rng.randrange(len(env.alphabet) + 1))
        else:
            actions = [env.action(rng) for _ in range(rng.randrange(4))]
        bind = {"n": len(actions)}
        for i, a in enumerate(actions):
            bind[f"a{i}"] = a
            bind[f"x{i}"] = env.sample(rng, degree=3)
            bind[f"y{i}"] = env.sample(rng, degree=3)
        return bind
    if name in ("EXP1", "EXP2"):
        n, m = rng.randrange(4), rng.randrange(4)
        bind = {"n": n, "m": m, "A": env.sync(rng)}
        for i in range(n):
            bind[f"a{i}"] = env.action(rng)
            bind[f"x{i}"] = env.sample(rng, degree=3, basic=True)
        for j in range(m):
            bind[f"b{j}"] = env.action(rng)
            bind[f"y{j}"] = env.sample(rng, degree=3, basic=True)
        return bind
    raise ValueError(f"no binding generator for schema {name}")


def check_axiom_instance(name: str, rng: random.Random, env: LawEnv) -> str | None:
    """One random ground instance of the schema, validated semantically."""
    from .axioms import AXIOM_SCHEMAS

    schema = AXIOM_SCHEMAS[name]
    bindings = _axiom_bindings(name, rng, env)
    lhs, rhs = schema.instantiate(bindings)
    if schema.kind == "eq":
        if not env.checker.rs_equiv(lhs, rhs):
            return _fail(f"axiom-{name}", lhs, rhs)
    else:
        if not env.checker.ready_sim_preorder(lhs, rhs).holds:
            return _fail(f"axiom-{name}", lhs, rhs)
    return None
