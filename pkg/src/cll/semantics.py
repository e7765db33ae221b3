"""Operational semantics: transitions, inconsistency, and reachable LTS fragments.

The transition relation and the inconsistency flag are computed by structural
recursion with memoization.  Evaluation order per term is: transitions first,
then (for conjunctions) the "has a consistent a-derivative" predicate, then
the inconsistency flag.  Every transition strictly decreases the degree of a
term, so the recursion terminates and the computed model is the unique one in
which every negative premise of the rules is settled before it is used.

Key facts the engine relies on and that the fragment checks re-verify:

- tau-purity: a state with a tau-transition has no visible transitions.
- Inconsistency propagates backward (LTS1) and every consistent state can
  stabilize through consistent states (LTS2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .terms import (
    BOT, CONJ, DISJ, EXT, NIL, PAR, PREFIX, TAU,
    Term, action_key, conj, ext_choice, par, pretty_print,
)

DEFAULT_MAX_STATES = 10**6


class StateLimitError(RuntimeError):
    """Raised when a fragment build exceeds its state budget."""

    def __init__(self, limit: int):
        super().__init__(f"state limit of {limit} states exceeded")
        self.limit = limit


def _entry_key(entry):
    return (action_key(entry[0]), entry[1].key())


class TransitionSet:
    """The outgoing transitions of one term: a set of (label, target) pairs."""

    __slots__ = ("entries", "_set")

    def __init__(self, entries: Iterable[tuple[str, Term]]):
        dedup = set(entries)
        self.entries: tuple[tuple[str, Term], ...] = tuple(sorted(dedup, key=_entry_key))
        self._set = frozenset(dedup)

    def __iter__(self) -> Iterator[tuple[str, Term]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, entry) -> bool:
        return entry in self._set

    def __eq__(self, other) -> bool:
        return isinstance(other, TransitionSet) and self._set == other._set

    def __hash__(self) -> int:
        return hash(self._set)

    def __repr__(self) -> str:
        inner = ", ".join(f"({a}, {t})" for a, t in self.entries)
        return "{" + inner + "}"

    @property
    def labels(self) -> frozenset[str]:
        """The ready set: every label occurring in the entries."""
        return frozenset(a for a, _ in self.entries)

    @property
    def is_stable(self) -> bool:
        return all(a != TAU for a, _ in self.entries)

    def tau_entries(self) -> tuple[tuple[str, Term], ...]:
        return tuple(e for e in self.entries if e[0] == TAU)

    def visible_entries(self) -> tuple[tuple[str, Term], ...]:
        return tuple(e for e in self.entries if e[0] != TAU)

    def targets(self, action: str) -> tuple[Term, ...]:
        return tuple(t for a, t in self.entries if a == action)


_EMPTY = TransitionSet(())


class Engine:
    """Memoized semantics evaluator.

    All operations are pure functions of the input term; an engine instance
    only caches results.  Instances are cheap, so the module-level wrappers
    build a fresh one per call; share an instance across calls when checking
    many related terms.
    """

    def __init__(self):
        self._trans: dict[Term, TransitionSet] = {}
        self._incons: dict[Term, bool] = {}
        self._eps_reach: dict[Term, frozenset[Term]] = {}

    # -- transitions (operational rules) -------------------------------------

    def transitions(self, t: Term) -> TransitionSet:
        cached = self._trans.get(t)
        if cached is not None:
            return cached
        kind = t.kind
        if kind in (NIL, BOT):
            result = _EMPTY
        elif kind == PREFIX:
            result = TransitionSet(((t.action, t.left),))
        elif kind == DISJ:
            result = TransitionSet(((TAU, t.left), (TAU, t.right)))
        else:
            left = self.transitions(t.left)
            right = self.transitions(t.right)
            entries: list[tuple[str, Term]] = []
            if kind == EXT:
                for a, y in left.tau_entries():
                    entries.append((TAU, ext_choice(y, t.right)))
                for a, y in right.tau_entries():
                    entries.append((TAU, ext_choice(t.left, y)))
                if right.is_stable:
                    entries.extend(left.visible_entries())
                if left.is_stable:
                    entries.extend(right.visible_entries())
            elif kind == CONJ:
                for a, y in left.tau_entries():
                    entries.append((TAU, conj(y, t.right)))
                for a, y in right.tau_entries():
                    entries.append((TAU, conj(t.left, y)))
                for a, y1 in left.visible_entries():
                    for b, y2 in right.visible_entries():
                        if a == b:
                            entries.append((a, conj(y1, y2)))
            else:  # PAR
                sync = t.sync
                for a, y in left.tau_entries():
                    entries.append((TAU, par(y, t.right, sync)))
                for a, y in right.tau_entries():
                    entries.append((TAU, par(t.left, y, sync)))
                if right.is_stable:
                    for a, y in left.visible_entries():
                        if a not in sync:
                            entries.append((a, par(y, t.right, sync)))
                if left.is_stable:
                    for a, y in right.visible_entries():
                        if a not in sync:
                            entries.append((a, par(t.left, y, sync)))
                for a, y1 in left.visible_entries():
                    if a in sync:
                        for b, y2 in right.visible_entries():
                            if b == a:
                                entries.append((a, par(y1, y2, sync)))
            result = TransitionSet(entries)
        self._trans[t] = result
        return result

    def ready_set(self, t: Term) -> frozenset[str]:
        """The set of labels t can immediately perform."""
        return self.transitions(t).labels

    def is_stable(self, t: Term) -> bool:
        """True iff t has no tau-transition."""
        return self.transitions(t).is_stable

    # -- inconsistency (predicate rules) --------------------------------------

    def is_inconsistent(self, t: Term) -> bool:
        cached = self._incons.get(t)
        if cached is not None:
            return cached
        kind = t.kind
        if kind == BOT:
            result = True
        elif kind == NIL:
            result = False
        elif kind == PREFIX:
            result = self.is_inconsistent(t.left)
        elif kind == DISJ:
            result = self.is_inconsistent(t.left) and self.is_inconsistent(t.right)
        elif kind in (EXT, PAR):
            result = self.is_inconsistent(t.left) or self.is_inconsistent(t.right)
        else:  # CONJ
            result = self._conj_inconsistent(t)
        self._incons[t] = result
        return result

    def _conj_inconsistent(self, t: Term) -> bool:
        if self.is_inconsistent(t.left) or self.is_inconsistent(t.right):
            return True
        trans = self.transitions(t)
        if trans.is_stable:
            # Stable conjunction whose sides offer different visible actions.
            if self.ready_set(t.left) != self.ready_set(t.right):
                return True
        # Some enabled label all of whose derivatives are inconsistent.
        for label in trans.labels:
            if not self.fbar(t, label):
                return True
        return False

    def fbar(self, t: Term, action: str) -> bool:
        """True iff the conjunction t has a consistent ``action``-derivative.

        Only defined for conjunctions; no rule derives this predicate for any
        other operator.
        """
        if t.kind != CONJ:
            raise ValueError("fbar is only defined for conjunction terms")
        return any(
            not self.is_inconsistent(target)
            for target in self.transitions(t).targets(action)
        )

    # -- weak transitions through consistent states ---------------------------

    def eps_f_reach(self, t: Term) -> frozenset[Term]:
        """All terms reachable from t by tau-steps through consistent states.

        Includes t itself; empty when t is inconsistent.
        """
        cached = self._eps_reach.get(t)
        if cached is not None:
            return cached
        if self.is_inconsistent(t):
            result: frozenset[Term] = frozenset()
        else:
            acc = {t}
            for label, target in self.transitions(t):
                if label == TAU:
                    acc.update(self.eps_f_reach(target))
            result = frozenset(acc)
        self._eps_reach[t] = result
        return result

    def weak_eps_f(self, t: Term) -> frozenset[Term]:
        """Stable consistent terms reachable from t through consistent tau-steps."""
        return frozenset(s for s in self.eps_f_reach(t) if self.is_stable(s))

    def weak_a_f(self, t: Term, action: str) -> frozenset[Term]:
        """Stable targets of a weak ``action``-transition through consistent states."""
        if action == TAU:
            raise ValueError("weak_a_f takes a visible action")
        out: set[Term] = set()
        for r in self.eps_f_reach(t):
            for target in self.transitions(r).targets(action):
                if not self.is_inconsistent(target):
                    out.update(self.weak_eps_f(target))
        return frozenset(out)

    # -- fragments -------------------------------------------------------------

    def build_lts(self, root: Term, max_states: int = DEFAULT_MAX_STATES) -> "LtsFragment":
        return self.build_joint_lts((root,), max_states)

    def build_joint_lts(self, roots: Iterable[Term],
                        max_states: int = DEFAULT_MAX_STATES) -> "LtsFragment":
        """Transition-closed fragment covering every given root (BFS order)."""
        roots = tuple(roots)
        states: list[Term] = []
        index: dict[Term, int] = {}
        queue: list[Term] = []
        for r in roots:
            if r not in index:
                index[r] = len(states)
                states.append(r)
                queue.append(r)
        pos = 0
        while pos < len(queue):
            t = queue[pos]
            pos += 1
            for _, target in self.transitions(t):
                if target not in index:
                    if len(states) >= max_states:
                        raise StateLimitError(max_states)
                    index[target] = len(states)
                    states.append(target)
                    queue.append(target)
        transitions = {t: self.transitions(t) for t in states}
        inconsistent = {t: self.is_inconsistent(t) for t in states}
        stable = {t: transitions[t].is_stable for t in states}
        fbar = {
            t: {label: self.fbar(t, label) for label in transitions[t].labels}
            for t in states
            if t.kind == CONJ
        }
        return LtsFragment(
            root=roots[0], states=tuple(states), index=index,
            transitions=transitions, inconsistent=inconsistent,
            stable=stable, fbar=fbar,
        )


@dataclass(frozen=True)
class LtsFragment:
    """The reachable sub-LTS of a term, with per-state flags.

    ``states`` is in BFS order from the root, which fixes the dense ids used
    by the JSON and DOT exports.  ``fbar`` records, for conjunction states
    only, which enabled labels have a consistent derivative; the predicate is
    undefined elsewhere.
    """

    root: Term
    states: tuple[Term, ...]
    index: dict[Term, int] = field(repr=False)
    transitions: dict[Term, TransitionSet] = field(repr=False)
    inconsistent: dict[Term, bool] = field(repr=False)
    stable: dict[Term, bool] = field(repr=False)
    fbar: dict[Term, dict[str, bool]] = field(repr=False)

    def __len__(self) -> int:
        return len(self.states)

    def to_json_dict(self) -> dict:
        return {
            "root": self.index[self.root],
            "states": [
                {
                    "id": self.index[t],
                    "term": pretty_print(t),
                    "stable": self.stable[t],
                    "inconsistent": self.inconsistent[t],
                }
                for t in self.states
            ],
            "transitions": [
                {"from": self.index[t], "label": label, "to": self.index[target]}
                for t in self.states
                for label, target in self.transitions[t]
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    def to_dot(self) -> str:
        lines = ["digraph lts {", "  rankdir=LR;"]
        for t in self.states:
            attrs = [f'label="{pretty_print(t)}"']
            if self.inconsistent[t]:
                attrs.append("style=filled")
            lines.append(f"  n{self.index[t]} [{', '.join(attrs)}];")
        for t in self.states:
            for label, target in self.transitions[t]:
                style = ", style=dashed" if label == TAU else ""
                lines.append(
                    f'  n{self.index[t]} -> n{self.index[target]} [label="{label}"{style}];'
                )
        lines.append("}")
        return "\n".join(lines)


# --- fragment-level well-formedness checks -----------------------------------

def tau_purity_violation(frag: LtsFragment) -> Term | None:
    """A state with both a tau-edge and a visible edge, if any."""
    for t in frag.states:
        labels = frag.transitions[t].labels
        if TAU in labels and len(labels) > 1:
            return t
    return None


def lts1_violation(frag: LtsFragment) -> Term | None:
    """A consistent state where some enabled label leads only to inconsistent
    states, if any (inconsistency must propagate backward)."""
    for t in frag.states:
        if frag.inconsistent[t]:
            continue
        trans = frag.transitions[t]
        for label in trans.labels:
            if all(frag.inconsistent[s] for s in trans.targets(label)):
                return t
    return None


def lts2_violation(frag: LtsFragment) -> Term | None:
    """A consistent state with no consistent tau-path to a stable consistent
    state, if any."""
    can_stabilize: dict[Term, bool] = {}

    def search(t: Term) -> bool:
        known = can_stabilize.get(t)
        if known is not None:
            return known
        if frag.inconsistent[t]:
            result = False
        elif frag.stable[t]:
            result = True
        else:
            result = any(
                search(target)
                for label, target in frag.transitions[t]
                if label == TAU and not frag.inconsistent[target]
            )
        can_stabilize[t] = result
        return result

    for t in frag.states:
        if not frag.inconsistent[t] and not search(t):
            return t
    return None


def degree_violation(frag: LtsFragment) -> Term | None:
    """A transition whose target does not strictly decrease the degree, if any."""
    for t in frag.states:
        for _, target in frag.transitions[t]:
            if target.degree >= t.degree:
                return t
    return None


def check_tau_pure(frag: LtsFragment) -> bool:
    return tau_purity_violation(frag) is None


def check_lts1(frag: LtsFragment) -> bool:
    return lts1_violation(frag) is None


def check_lts2(frag: LtsFragment) -> bool:
    return lts2_violation(frag) is None


# --- supported-model self-check ----------------------------------------------

class _FactView:
    """Fact lookup for the rule check: fragment data for recorded states,
    engine-computed data for auxiliary terms (operands of recorded states)."""

    def __init__(self, frag: LtsFragment, engine: Engine):
        self.frag = frag
        self.engine = engine

    def trans(self, t: Term) -> TransitionSet:
        ts = self.frag.transitions.get(t)
        return ts if ts is not None else self.engine.transitions(t)

    def incons(self, t: Term) -> bool:
        flag = self.frag.inconsistent.get(t)
        return flag if flag is not None else self.engine.is_inconsistent(t)

    def stable(self, t: Term) -> bool:
        return self.trans(t).is_stable


def stable_model_violation(frag: LtsFragment, engine: Engine | None = None) -> str | None:
    """Check the fragment against the ground rules of the calculus.

    Supportedness: every recorded transition, inconsistency flag and
    consistent-derivative flag must be the conclusion of some rule instance
    whose premises hold.  Model: every rule instance rooted at a recorded
    state whose premises hold must have its conclusion recorded.  Returns a
    description of the first violation, or None.
    """
    view = _FactView(frag, engine or Engine())

    for t in frag.states:
        expected = _derivable_transitions(t, view)
        recorded = frag.transitions[t]
        for entry in recorded:
            if entry not in expected:
                return f"unsupported transition {entry[0]} from {t!r}"
        for entry in expected:
            if entry not in recorded:
                return f"missing transition {entry[0]} to {entry[1]!r} from {t!r}"

        if frag.stable[t] != recorded.is_stable:
            return f"stability flag of {t!r} disagrees with its transitions"

        if t.kind == CONJ:
            fb = frag.fbar.get(t, {})
            expected_fb = {
                label: any(not view.incons(s) for s in recorded.targets(label))
                for label in recorded.labels
            }
            for label, value in fb.items():
                if label not in expected_fb:
                    return f"consistent-derivative flag for unused label {label} at {t!r}"
                if value != expected_fb[label]:
                    return f"consistent-derivative flag for {label} wrong at {t!r}"
            for label, value in expected_fb.items():
                if label not in fb:
                    return f"consistent-derivative flag for {label} missing at {t!r}"
        elif t in frag.fbar and frag.fbar[t]:
            return f"consistent-derivative flags recorded for non-conjunction {t!r}"

        derivable = _derivable_inconsistency(t, view, frag)
        if frag.inconsistent[t] and not derivable:
            return f"unsupported inconsistency flag at {t!r}"
        if derivable and not frag.inconsistent[t]:
            return f"missing inconsistency flag at {t!r}"
    return None


def _derivable_transitions(t: Term, view: _FactView) -> set[tuple[str, Term]]:
    kind = t.kind
    out: set[tuple[str, Term]] = set()
    if kind == PREFIX:
        out.add((t.action, t.left))
    elif kind == DISJ:
        out.add((TAU, t.left))
        out.add((TAU, t.right))
    elif kind in (EXT, CONJ, PAR):
        lt = view.trans(t.left)
        rt = view.trans(t.right)
        if kind == EXT:
            for _, y in lt.tau_entries():
                out.add((TAU, ext_choice(y, t.right)))
            for _, y in rt.tau_entries():
                out.add((TAU, ext_choice(t.left, y)))
            if rt.is_stable:
                out.update(lt.visible_entries())
            if lt.is_stable:
                out.update(rt.visible_entries())
        elif kind == CONJ:
            for _, y in lt.tau_entries():
                out.add((TAU, conj(y, t.right)))
            for _, y in rt.tau_entries():
                out.add((TAU, conj(t.left, y)))
            for a, y1 in lt.visible_entries():
                for b, y2 in rt.visible_entries():
                    if a == b:
                        out.add((a, conj(y1, y2)))
        else:
            sync = t.sync
            for _, y in lt.tau_entries():
                out.add((TAU, par(y, t.right, sync)))
            for _, y in rt.tau_entries():
                out.add((TAU, par(t.left, y, sync)))
            if rt.is_stable:
                for a, y in lt.visible_entries():
                    if a not in sync:
                        out.add((a, par(y, t.right, sync)))
            if lt.is_stable:
                for a, y in rt.visible_entries():
                    if a not in sync:
                        out.add((a, par(t.left, y, sync)))
            for a, y1 in lt.visible_entries():
                if a in sync:
                    for b, y2 in rt.visible_entries():
                        if b == a:
                            out.add((a, par(y1, y2, sync)))
    return out


def _derivable_inconsistency(t: Term, view: _FactView, frag: LtsFragment) -> bool:
    kind = t.kind
    if kind == BOT:
        return True
    if kind == NIL:
        return False
    if kind == PREFIX:
        return view.incons(t.left)
    if kind == DISJ:
        return view.incons(t.left) and view.incons(t.right)
    if kind in (EXT, PAR):
        return view.incons(t.left) or view.incons(t.right)
    # conjunction
    if view.incons(t.left) or view.incons(t.right):
        return True
    recorded = frag.transitions[t]
    if recorded.is_stable:
        if view.trans(t.left).labels != view.trans(t.right).labels:
            return True
    fb = frag.fbar.get(t, {})
    for label in recorded.labels:
        if not fb.get(label, False):
            return True
    return False


def check_stable_model(frag: LtsFragment, engine: Engine | None = None) -> bool:
    return stable_model_violation(frag, engine) is None


# --- module-level one-shot wrappers -------------------------------------------

def transitions(t: Term) -> TransitionSet:
    return Engine().transitions(t)


def is_inconsistent(t: Term) -> bool:
    return Engine().is_inconsistent(t)


def fbar(t: Term, action: str) -> bool:
    return Engine().fbar(t, action)


def ready_set(t: Term) -> frozenset[str]:
    return Engine().ready_set(t)


def is_stable(t: Term) -> bool:
    return Engine().is_stable(t)


def weak_eps_f(t: Term) -> frozenset[Term]:
    return Engine().weak_eps_f(t)


def weak_a_f(t: Term, action: str) -> frozenset[Term]:
    return Engine().weak_a_f(t, action)


def build_lts(t: Term, max_states: int = DEFAULT_MAX_STATES) -> LtsFragment:
    return Engine().build_lts(t, max_states)
