"""Ready-simulation refinement: the stable preorder, the full preorder, and
their induced equivalences, with witnesses explaining every failure.

A stable ready simulation relates stable terms such that consistency is
preserved left to right (RS2), ready sets match when the left side is
consistent (RS4), and every weak visible move of the left side through
consistent states can be matched by the right side (RS3).  The full preorder
requires every consistent stabilization of the left term to be simulated by
one of the right term.

The decision procedure is memoized structural recursion; it computes the
greatest fixpoint directly because weak moves strictly decrease term degree,
so the recursion never revisits a pair on its own call path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .semantics import Engine
from .terms import TAU, Term, pretty_print

_TRIED_LIMIT = 3  # failed candidate matches kept per witness node


@dataclass(frozen=True)
class NotStable:
    """RS1 violation: the named side of the pair is not stable."""
    side: str  # "left" or "right"
    clause = "RS1"


@dataclass(frozen=True)
class ConsistencyGap:
    """RS2 violation: lhs is consistent but rhs is not."""
    lhs: Term
    rhs: Term
    clause = "RS2"


@dataclass(frozen=True)
class ReadySetMismatch:
    """RS4 violation: consistent lhs offers different actions than rhs."""
    lhs: Term
    rhs: Term
    only_left: frozenset[str]
    only_right: frozenset[str]
    clause = "RS4"


@dataclass(frozen=True)
class UnmatchedMove:
    """RS3 violation: a weak move of lhs that no weak move of rhs simulates."""
    source: Term
    action: str
    target: Term
    tried: tuple[tuple[Term, "Witness"], ...]
    clause = "RS3"


@dataclass(frozen=True)
class UnmatchedStabilization:
    """Preorder violation: a stabilization of lhs no rhs stabilization simulates."""
    target: Term
    tried: tuple[tuple[Term, "Witness"], ...]
    clause = "preorder"


Witness = Union[NotStable, ConsistencyGap, ReadySetMismatch, UnmatchedMove,
                UnmatchedStabilization]


@dataclass(frozen=True)
class RefinementVerdict:
    holds: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.holds


_HOLDS = RefinementVerdict(True, None)


def witness_to_json_dict(w: Witness) -> dict:
    if isinstance(w, NotStable):
        return {"kind": "not_stable", "clause": w.clause, "side": w.side}
    if isinstance(w, ConsistencyGap):
        return {
            "kind": "consistency_gap", "clause": w.clause,
            "lhs": pretty_print(w.lhs), "rhs": pretty_print(w.rhs),
        }
    if isinstance(w, ReadySetMismatch):
        return {
            "kind": "ready_set_mismatch", "clause": w.clause,
            "lhs": pretty_print(w.lhs), "rhs": pretty_print(w.rhs),
            "only_left": sorted(w.only_left), "only_right": sorted(w.only_right),
        }
    if isinstance(w, UnmatchedMove):
        return {
            "kind": "unmatched_move", "clause": w.clause,
            "source": pretty_print(w.source), "action": w.action,
            "target": pretty_print(w.target),
            "tried": [
                {"candidate": pretty_print(c), "witness": witness_to_json_dict(sub)}
                for c, sub in w.tried
            ],
        }
    if isinstance(w, UnmatchedStabilization):
        return {
            "kind": "unmatched_stabilization", "clause": w.clause,
            "target": pretty_print(w.target),
            "tried": [
                {"candidate": pretty_print(c), "witness": witness_to_json_dict(sub)}
                for c, sub in w.tried
            ],
        }
    raise TypeError(f"not a witness: {w!r}")


def verdict_to_json_dict(v: RefinementVerdict) -> dict:
    out: dict = {"holds": v.holds}
    if v.witness is not None:
        out["witness"] = witness_to_json_dict(v.witness)
    return out


class RefinementChecker:
    """Decides the ready-simulation relations over a shared semantics engine."""

    def __init__(self, engine: Engine | None = None):
        self.engine = engine or Engine()
        self._stable_memo: dict[tuple[Term, Term], RefinementVerdict] = {}
        self._pre_memo: dict[tuple[Term, Term], RefinementVerdict] = {}

    def stable_ready_sim(self, t: Term, s: Term) -> RefinementVerdict:
        """Does some stable ready simulation relate (t, s)?

        Non-stable inputs fail with a NotStable witness.  An inconsistent
        stable t is below every stable s: all remaining clauses are guarded
        by the consistency of t.
        """
        key = (t, s)
        cached = self._stable_memo.get(key)
        if cached is not None:
            return cached
        verdict = self._stable_ready_sim(t, s)
        self._stable_memo[key] = verdict
        return verdict

    def _stable_ready_sim(self, t: Term, s: Term) -> RefinementVerdict:
        eng = self.engine
        if not eng.is_stable(t):
            return RefinementVerdict(False, NotStable("left"))
        if not eng.is_stable(s):
            return RefinementVerdict(False, NotStable("right"))
        if eng.is_inconsistent(t):
            return _HOLDS
        if eng.is_inconsistent(s):
            return RefinementVerdict(False, ConsistencyGap(t, s))
        ready_t = eng.ready_set(t)
        ready_s = eng.ready_set(s)
        if ready_t != ready_s:
            return RefinementVerdict(
                False, ReadySetMismatch(t, s, ready_t - ready_s, ready_s - ready_t))
        for action in sorted(ready_t):
            if action == TAU:
                continue
            candidates = sorted(eng.weak_a_f(s, action), key=Term.key)
            for target in sorted(eng.weak_a_f(t, action), key=Term.key):
                tried: list[tuple[Term, Witness]] = []
                for candidate in candidates:
                    sub = self.stable_ready_sim(target, candidate)
                    if sub.holds:
                        break
                    if len(tried) < _TRIED_LIMIT:
                        tried.append((candidate, sub.witness))
                else:
                    return RefinementVerdict(
                        False, UnmatchedMove(t, action, target, tuple(tried)))
        return _HOLDS

    def ready_sim_preorder(self, t: Term, s: Term) -> RefinementVerdict:
        """Every consistent stabilization of t is simulated by one of s."""
        key = (t, s)
        cached = self._pre_memo.get(key)
        if cached is not None:
            return cached
        eng = self.engine
        verdict = _HOLDS
        candidates = sorted(eng.weak_eps_f(s), key=Term.key)
        for target in sorted(eng.weak_eps_f(t), key=Term.key):
            tried: list[tuple[Term, Witness]] = []
            for candidate in candidates:
                sub = self.stable_ready_sim(target, candidate)
                if sub.holds:
                    break
                if len(tried) < _TRIED_LIMIT:
                    tried.append((candidate, sub.witness))
            else:
                verdict = RefinementVerdict(
                    False, UnmatchedStabilization(target, tuple(tried)))
                break
        self._pre_memo[key] = verdict
        return verdict

    def rs_equiv(self, t: Term, s: Term) -> bool:
        """Equivalence induced by the preorder (both directions hold)."""
        return self.ready_sim_preorder(t, s).holds and self.ready_sim_preorder(s, t).holds

    def stable_rs_equiv(self, t: Term, s: Term) -> bool:
        """Equivalence induced by the stable relation (both directions hold)."""
        return self.stable_ready_sim(t, s).holds and self.stable_ready_sim(s, t).holds

    def uniform_wrt_f(self, t: Term, s: Term) -> bool:
        """True iff t and s agree on inconsistency."""
        return self.engine.is_inconsistent(t) == self.engine.is_inconsistent(s)


# --- module-level one-shot wrappers -------------------------------------------

def stable_ready_sim(t: Term, s: Term) -> RefinementVerdict:
    return RefinementChecker().stable_ready_sim(t, s)


def ready_sim_preorder(t: Term, s: Term) -> RefinementVerdict:
    return RefinementChecker().ready_sim_preorder(t, s)


def rs_equiv(t: Term, s: Term) -> bool:
    return RefinementChecker().rs_equiv(t, s)


def stable_rs_equiv(t: Term, s: Term) -> bool:
    return RefinementChecker().stable_rs_equiv(t, s)


def uniform_wrt_f(t: Term, s: Term) -> bool:
    return RefinementChecker().uniform_wrt_f(t, s)
