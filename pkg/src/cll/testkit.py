"""Random term generation and independent brute-force oracles.

The semantics oracle recomputes transitions and inconsistency by closing the
ground instances of the operational and predicate rules over a syntactic
over-approximation of the reachable universe, processing degrees in ascending
order (all transitions of a degree before its consistent-derivative flags
before its inconsistency flags).  It shares no code with the engine's
structural recursion.

The simulation oracle computes the largest stable ready simulation on a
fragment by deleting violating pairs until a fixpoint is reached, which is
the textbook greatest-fixpoint construction and independent of the memoized
recursive decision procedure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .semantics import Engine, LtsFragment, TransitionSet
from .terms import (
    BOT, CONJ, DISJ, EXT, NIL, PAR, PREFIX, TAU,
    Term, bot, conj, disj, ext_choice, nil, par, prefix,
)

DEFAULT_WEIGHTS: dict[str, float] = {
    "nil": 1.0,
    "bot": 0.7,
    "prefix": 2.4,
    "tau_prefix": 0.8,
    "ext": 1.6,
    "disj": 1.3,
    "conj": 1.0,
    "par": 1.0,
}


@dataclass(frozen=True)
class GenConfig:
    """Parameters for the random term generator."""

    max_degree: int = 8
    alphabet: tuple[str, ...] = ("a", "b", "c")
    weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    basic_only: bool = False
    stable_only: bool = False
    seed: int = 0

    def validate(self) -> None:
        if self.max_degree < 1:
            raise ValueError("max_degree must be at least 1")
        if not self.alphabet:
            raise ValueError("alphabet must be nonempty")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("weights must be nonnegative")
        if not any(w > 0 for w in self.weights.values()):
            raise ValueError("at least one weight must be positive")


def gen_term(cfg: GenConfig) -> Term:
    """Deterministic random term: degree <= max_degree, basic/stable as asked."""
    cfg.validate()
    rng = random.Random(cfg.seed)
    return sample_term(rng, cfg.max_degree,
                       alphabet=cfg.alphabet, weights=cfg.weights,
                       basic=cfg.basic_only, stable=cfg.stable_only)


def gen_terms(cfg: GenConfig, count: int) -> Iterator[Term]:
    """Stream of terms from consecutive seeds starting at cfg.seed."""
    for i in range(count):
        yield gen_term(GenConfig(
            max_degree=cfg.max_degree, alphabet=cfg.alphabet, weights=cfg.weights,
            basic_only=cfg.basic_only, stable_only=cfg.stable_only,
            seed=cfg.seed + i))


def sample_term(rng: random.Random, budget: int, *,
                alphabet: tuple[str, ...] = ("a", "b", "c"),
                weights: Mapping[str, float] | None = None,
                basic: bool = False, stable: bool = False) -> Term:
    """One random term drawn from ``rng`` with degree <= ``budget``.

    ``stable`` rules out top-level disjunction and tau-prefix and recurses
    into the operands of static operators (prefix bodies stay unconstrained:
    a visible prefix is stable whatever its body does).
    """
    weights = weights or DEFAULT_WEIGHTS
    options: list[tuple[str, float]] = [("nil", weights.get("nil", 0.0))]
    if not basic:
        options.append(("bot", weights.get("bot", 0.0)))
    if budget >= 2:
        options.append(("prefix", weights.get("prefix", 0.0)))
        if not stable:
            options.append(("tau_prefix", weights.get("tau_prefix", 0.0)))
    if budget >= 3:
        options.append(("ext", weights.get("ext", 0.0)))
        options.append(("par", weights.get("par", 0.0)))
        if not stable:
            options.append(("disj", weights.get("disj", 0.0)))
        if not basic:
            options.append(("conj", weights.get("conj", 0.0)))
    total = sum(w for _, w in options)
    if total <= 0:
        return nil()
    pick = rng.random() * total
    choice = options[-1][0]
    for name, w in options:
        pick -= w
        if pick < 0:
            choice = name
            break
    if choice == "nil":
        return nil()
    if choice == "bot":
        return bot()
    if choice == "prefix":
        body = sample_term(rng, budget - 1, alphabet=alphabet, weights=weights,
                           basic=basic, stable=False)
        return prefix(rng.choice(alphabet), body)
    if choice == "tau_prefix":
        body = sample_term(rng, budget - 1, alphabet=alphabet, weights=weights,
                           basic=basic, stable=False)
        return prefix(TAU, body)
    left_budget = rng.randint(1, budget - 2)
    child_stable = stable if choice != "disj" else False
    left = sample_term(rng, left_budget, alphabet=alphabet, weights=weights,
                       basic=basic, stable=child_stable)
    right = sample_term(rng, budget - 1 - left_budget, alphabet=alphabet,
                        weights=weights, basic=basic, stable=child_stable)
    if choice == "ext":
        return ext_choice(left, right)
    if choice == "disj":
        return disj(left, right)
    if choice == "conj":
        return conj(left, right)
    sync = frozenset(a for a in alphabet if rng.random() < 0.45)
    return par(left, right, sync)


# --- rule-closure semantics oracle ---------------------------------------------

def closure_universe(t: Term) -> frozenset[Term]:
    """Syntactic over-approximation of the terms reachable from t.

    Closed under operands and under rebuilding static operators with any
    combination of approximated derivatives, so every genuine transition
    target of a member is a member.
    """
    memo: dict[Term, frozenset[Term]] = {}

    def go(u: Term) -> frozenset[Term]:
        got = memo.get(u)
        if got is not None:
            return got
        kind = u.kind
        if kind in (NIL, BOT):
            out = frozenset((u,))
        elif kind == PREFIX:
            out = go(u.left) | {u}
        elif kind == DISJ:
            out = go(u.left) | go(u.right) | {u}
        else:
            ls, rs = go(u.left), go(u.right)
            combos: set[Term] = {u}
            if kind == EXT:
                rebuild = lambda a, b: ext_choice(a, b)
                combos.update(ls)
                combos.update(rs)
            elif kind == CONJ:
                rebuild = lambda a, b: conj(a, b)
                combos.update(ls)
                combos.update(rs)
            else:
                sync = u.sync
                rebuild = lambda a, b: par(a, b, sync)
                combos.update(ls)
                combos.update(rs)
            for a in ls:
                for b in rs:
                    combos.add(rebuild(a, b))
            out = frozenset(combos)
        memo[u] = out
        return out

    return go(t)


@dataclass
class OracleModel:
    """Facts computed by the rule closure over a closed universe."""

    universe: frozenset[Term]
    transitions: dict[Term, frozenset[tuple[str, Term]]]
    inconsistent: dict[Term, bool]
    fbar: dict[Term, dict[str, bool]]


def oracle_semantics(t: Term) -> OracleModel:
    """Close the ground rules over the universe of t, stratified by degree."""
    universe = closure_universe(t)
    by_degree: dict[int, list[Term]] = {}
    for u in universe:
        by_degree.setdefault(u.degree, []).append(u)

    trans: dict[Term, set[tuple[str, Term]]] = {u: set() for u in universe}
    incons: set[Term] = set()
    fbar: dict[Term, dict[str, bool]] = {}

    def has_tau(u: Term) -> bool:
        return any(a == TAU for a, _ in trans[u])

    for d in sorted(by_degree):
        layer = by_degree[d]
        # Stratum 1: transitions of degree-d terms.  Premises only mention
        # operands (strictly smaller degree), so one pass is a fixpoint.
        for u in layer:
            out = trans[u]
            kind = u.kind
            if kind == PREFIX:
                out.add((u.action, u.left))
            elif kind == DISJ:
                out.add((TAU, u.left))
                out.add((TAU, u.right))
            elif kind == EXT:
                for a, y in trans[u.left]:
                    if a == TAU:
                        out.add((TAU, ext_choice(y, u.right)))
                    elif not has_tau(u.right):
                        out.add((a, y))
                for a, y in trans[u.right]:
                    if a == TAU:
                        out.add((TAU, ext_choice(u.left, y)))
                    elif not has_tau(u.left):
                        out.add((a, y))
            elif kind == CONJ:
                for a, y in trans[u.left]:
                    if a == TAU:
                        out.add((TAU, conj(y, u.right)))
                    else:
                        for b, z in trans[u.right]:
                            if b == a:
                                out.add((a, conj(y, z)))
                for b, z in trans[u.right]:
                    if b == TAU:
                        out.add((TAU, conj(u.left, z)))
            elif kind == PAR:
                sync = u.sync
                for a, y in trans[u.left]:
                    if a == TAU:
                        out.add((TAU, par(y, u.right, sync)))
                    elif a in sync:
                        for b, z in trans[u.right]:
                            if b == a:
                                out.add((a, par(y, z, sync)))
                    elif not has_tau(u.right):
                        out.add((a, par(y, u.right, sync)))
                for b, z in trans[u.right]:
                    if b == TAU:
                        out.add((TAU, par(u.left, z, sync)))
                    elif b not in sync and not has_tau(u.left):
                        out.add((b, par(u.left, z, sync)))
        # Stratum 2: consistent-derivative flags of degree-d conjunctions.
        # Targets have smaller degree, so their flags are settled.
        for u in layer:
            if u.kind == CONJ:
                flags: dict[str, bool] = {}
                for a, y in trans[u]:
                    if y not in incons:
                        flags[a] = True
                    else:
                        flags.setdefault(a, False)
                fbar[u] = flags
        # Stratum 3: inconsistency at degree d; premises mention operands and
        # same-degree flags from stratum 2 only.
        for u in layer:
            kind = u.kind
            if kind == BOT:
                incons.add(u)
            elif kind == PREFIX:
                if u.left in incons:
                    incons.add(u)
            elif kind == DISJ:
                if u.left in incons and u.right in incons:
                    incons.add(u)
            elif kind in (EXT, PAR):
                if u.left in incons or u.right in incons:
                    incons.add(u)
            elif kind == CONJ:
                if u.left in incons or u.right in incons:
                    incons.add(u)
                elif not has_tau(u) and {a for a, _ in trans[u.left]} != {
                        a for a, _ in trans[u.right]}:
                    incons.add(u)
                elif any(not flag for flag in fbar[u].values()):
                    incons.add(u)

    return OracleModel(
        universe=universe,
        transitions={u: frozenset(trans[u]) for u in universe},
        inconsistent={u: u in incons for u in universe},
        fbar=fbar,
    )


def semantics_disagreement(t: Term, engine: Engine | None = None) -> str | None:
    """Compare the structural-recursion engine with the rule-closure oracle
    on every term of t's universe; describes the first mismatch, if any."""
    engine = engine or Engine()
    model = oracle_semantics(t)
    for u in sorted(model.universe, key=Term.key):
        eng_trans = frozenset(engine.transitions(u).entries)
        if eng_trans != model.transitions[u]:
            return f"transitions differ at {u!r}"
        if engine.is_inconsistent(u) != model.inconsistent[u]:
            return f"inconsistency differs at {u!r}"
        if u.kind == CONJ:
            for label, flag in model.fbar[u].items():
                if engine.fbar(u, label) != flag:
                    return f"consistent-derivative flag differs at {u!r} for {label}"
    return None


# --- greatest-fixpoint simulation oracle ----------------------------------------

def _frag_eps_f_reach(frag: LtsFragment, t: Term) -> set[Term]:
    if frag.inconsistent[t]:
        return set()
    out = {t}
    stack = [t]
    while stack:
        u = stack.pop()
        for label, target in frag.transitions[u]:
            if label == TAU and not frag.inconsistent[target] and target not in out:
                out.add(target)
                stack.append(target)
    return out


def _frag_weak_eps(frag: LtsFragment, t: Term) -> set[Term]:
    return {s for s in _frag_eps_f_reach(frag, t) if frag.stable[s]}


def _frag_weak_a(frag: LtsFragment, t: Term, action: str) -> set[Term]:
    out: set[Term] = set()
    for r in _frag_eps_f_reach(frag, t):
        for label, target in frag.transitions[r]:
            if label == action and not frag.inconsistent[target]:
                out |= _frag_weak_eps(frag, target)
    return out


def oracle_stable_sim(frag: LtsFragment) -> frozenset[tuple[Term, Term]]:
    """Largest stable ready simulation on the fragment's states.

    Starts from all pairs of stable states and deletes pairs violating the
    consistency, ready-set or weak-move clauses until nothing changes.
    """
    stable_states = [t for t in frag.states if frag.stable[t]]
    visible = sorted({
        a for t in frag.states for a in frag.transitions[t].labels if a != TAU
    })
    moves: dict[tuple[Term, str], set[Term]] = {
        (t, a): _frag_weak_a(frag, t, a) for t in stable_states for a in visible
    }
    relation = {(p, q) for p in stable_states for q in stable_states}
    changed = True
    while changed:
        changed = False
        for pair in list(relation):
            p, q = pair
            if frag.inconsistent[p]:
                continue
            ok = not frag.inconsistent[q] and (
                frag.transitions[p].labels == frag.transitions[q].labels)
            if ok:
                for a in visible:
                    targets = moves[(p, a)]
                    if not targets:
                        continue
                    candidates = moves[(q, a)]
                    if any(
                        all((x, y) not in relation for y in candidates)
                        for x in targets
                    ):
                        ok = False
                        break
            if not ok:
                relation.discard(pair)
                changed = True
    return frozenset(relation)
