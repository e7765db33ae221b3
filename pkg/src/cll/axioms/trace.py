"""Proof traces: sequences of schema instances composed by REF/TRANS/CONTEXT.

A step records the schema (or inference rule) name, the binding of its
variables, and its concluded inequation.  The validator re-instantiates every
step from its bindings, checks side conditions, and requires the premises of
TRANS and CONTEXT steps to be conclusions of earlier steps; a trace is valid
when additionally its goal (both directions, for an equation) appears among
the step conclusions.

The builder deduplicates: a step is only appended when its conclusion is not
yet available, so traces stay proportional to the number of distinct derived
inequations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from ..terms import Term, conj, disj, ext_choice, par, prefix, pretty_print
from .schemas import AXIOM_SCHEMAS, SchemaError

# Operator tags used by CONTEXT steps.
OP_PREFIX, OP_EXT, OP_CONJ, OP_DISJ, OP_PAR = "prefix", "ext", "conj", "disj", "par"

Op = tuple  # ("prefix", action) | ("ext",) | ("conj",) | ("disj",) | ("par", sync)


def apply_op(op: Op, children: Sequence[Term]) -> Term:
    tag = op[0]
    if tag == OP_PREFIX:
        (child,) = children
        return prefix(op[1], child)
    left, right = children
    if tag == OP_EXT:
        return ext_choice(left, right)
    if tag == OP_CONJ:
        return conj(left, right)
    if tag == OP_DISJ:
        return disj(left, right)
    if tag == OP_PAR:
        return par(left, right, op[1])
    raise ValueError(f"unknown operator tag {tag!r}")


def op_arity(op: Op) -> int:
    return 1 if op[0] == OP_PREFIX else 2


@dataclass(frozen=True)
class ProofStep:
    rule: str
    bindings: dict[str, object]
    conclusion: tuple[Term, Term]  # lhs <= rhs


@dataclass(frozen=True)
class ProofTrace:
    """A proof of goal_lhs <= goal_rhs (or = when relation is "eq")."""

    goal_lhs: Term
    goal_rhs: Term
    relation: str  # "le" or "eq"
    steps: tuple[ProofStep, ...]

    def to_text(self) -> str:
        head = "=" if self.relation == "eq" else "≤"
        lines = [
            f"GOAL: {pretty_print(self.goal_lhs)} {head} {pretty_print(self.goal_rhs)}"
        ]
        for i, step in enumerate(self.steps):
            binds = "; ".join(
                f"{k}={_binding_text(v)}" for k, v in sorted(step.bindings.items())
            )
            lhs, rhs = step.conclusion
            lines.append(
                f"STEP {i}: {step.rule} [{binds}] ⊢ "
                f"{pretty_print(lhs)} ≤ {pretty_print(rhs)}"
            )
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "goal": {
                "lhs": pretty_print(self.goal_lhs),
                "rhs": pretty_print(self.goal_rhs),
                "relation": self.relation,
            },
            "steps": [
                {
                    "index": i,
                    "rule": step.rule,
                    "bindings": {
                        k: _binding_json(v) for k, v in sorted(step.bindings.items())
                    },
                    "lhs": pretty_print(step.conclusion[0]),
                    "rhs": pretty_print(step.conclusion[1]),
                }
                for i, step in enumerate(self.steps)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    def __len__(self) -> int:
        return len(self.steps)


def _binding_text(value) -> str:
    if isinstance(value, Term):
        return pretty_print(value)
    if isinstance(value, frozenset):
        return "{" + ",".join(sorted(value)) + "}"
    return str(value)


def _binding_json(value):
    if isinstance(value, Term):
        return pretty_print(value)
    if isinstance(value, frozenset):
        return sorted(value)
    return value


class Le(NamedTuple):
    """Handle for an inequation already concluded in the builder."""

    lhs: Term
    rhs: Term


class Eq(NamedTuple):
    """Handle for an equation: both directions concluded in the builder."""

    lhs: Term
    rhs: Term

    @property
    def fwd(self) -> Le:
        return Le(self.lhs, self.rhs)

    @property
    def bwd(self) -> Le:
        return Le(self.rhs, self.lhs)


class TraceBuilder:
    """Accumulates steps; every returned handle is backed by emitted steps."""

    def __init__(self):
        self._steps: list[ProofStep] = []
        self._conclusions: set[tuple[Term, Term]] = set()

    def _emit(self, rule: str, bindings: dict[str, object],
              conclusion: tuple[Term, Term]) -> None:
        if conclusion in self._conclusions:
            return
        self._steps.append(ProofStep(rule, bindings, conclusion))
        self._conclusions.add(conclusion)

    def axiom(self, name: str, **bindings) -> Eq | Le:
        """Instantiate a schema; equations yield both directions."""
        schema = AXIOM_SCHEMAS[name]
        lhs, rhs = schema.instantiate(bindings)
        self._emit(name, bindings, (lhs, rhs))
        if schema.kind == "eq":
            self._emit(name, bindings, (rhs, lhs))
            return Eq(lhs, rhs)
        return Le(lhs, rhs)

    def ref(self, t: Term) -> Le:
        self._emit("REF", {"t": t}, (t, t))
        return Le(t, t)

    def eq_refl(self, t: Term) -> Eq:
        self.ref(t)
        return Eq(t, t)

    def trans(self, *links: Le) -> Le:
        links = [l for l in links if l.lhs is not l.rhs]
        if not links:
            raise ValueError("trans needs at least one non-trivial link")
        acc = links[0]
        for nxt in links[1:]:
            if acc.rhs is not nxt.lhs:
                raise ValueError("trans links do not chain")
            self._emit("TRANS", {"t": acc.lhs, "u": acc.rhs, "v": nxt.rhs},
                       (acc.lhs, nxt.rhs))
            acc = Le(acc.lhs, nxt.rhs)
        return acc

    def le_chain(self, first: Le, *rest: Le) -> Le:
        chain = [first, *rest]
        if all(l.lhs is l.rhs for l in chain):
            return first
        return self.trans(*chain)

    def eq_sym(self, e: Eq) -> Eq:
        return Eq(e.rhs, e.lhs)

    def eq_trans(self, *eqs: Eq) -> Eq:
        real = [e for e in eqs if e.lhs is not e.rhs]
        if not real:
            return eqs[0]
        acc = real[0]
        for nxt in real[1:]:
            self.trans(acc.fwd, nxt.fwd)
            self.trans(nxt.bwd, acc.bwd)
            acc = Eq(acc.lhs, nxt.rhs)
        return acc

    def context(self, op: Op, kids: Sequence[Le]) -> Le:
        lhs = apply_op(op, [k.lhs for k in kids])
        rhs = apply_op(op, [k.rhs for k in kids])
        if lhs is rhs:
            return self.ref(lhs)
        bindings: dict[str, object] = {"f": op[0]}
        if op[0] == OP_PREFIX:
            bindings["a"] = op[1]
        elif op[0] == OP_PAR:
            bindings["A"] = op[1]
        for i, kid in enumerate(kids, start=1):
            bindings[f"t{i}"] = kid.lhs
            bindings[f"u{i}"] = kid.rhs
        self._emit("CONTEXT", bindings, (lhs, rhs))
        return Le(lhs, rhs)

    def eq_context(self, op: Op, kids: Sequence[Eq]) -> Eq:
        fwd = self.context(op, [k.fwd for k in kids])
        self.context(op, [k.bwd for k in kids])
        return Eq(fwd.lhs, fwd.rhs)

    def has_conclusion(self, lhs: Term, rhs: Term) -> bool:
        return (lhs, rhs) in self._conclusions

    def finish(self, goal_lhs: Term, goal_rhs: Term, relation: str) -> ProofTrace:
        if relation not in ("le", "eq"):
            raise ValueError("relation must be 'le' or 'eq'")
        return ProofTrace(goal_lhs, goal_rhs, relation, tuple(self._steps))


# --- validation -----------------------------------------------------------------

def trace_violation(trace: ProofTrace) -> tuple[int, str] | None:
    """The first invalid step (index, reason), or None if the trace is valid.

    Index -1 flags a goal that the steps do not establish.
    """
    seen: set[tuple[Term, Term]] = set()
    for i, step in enumerate(trace.steps):
        reason = _step_violation(step, seen)
        if reason is not None:
            return (i, reason)
        seen.add(step.conclusion)
    lhs, rhs = trace.goal_lhs, trace.goal_rhs
    if (lhs, rhs) not in seen:
        return (-1, "goal inequation never concluded")
    if trace.relation == "eq" and (rhs, lhs) not in seen:
        return (-1, "converse of the goal equation never concluded")
    return None


def _step_violation(step: ProofStep, seen: set[tuple[Term, Term]]) -> str | None:
    rule = step.rule
    bindings = step.bindings
    lhs, rhs = step.conclusion
    if rule == "REF":
        t = bindings.get("t")
        if not isinstance(t, Term) or (lhs, rhs) != (t, t):
            return "REF conclusion must be t ≤ t"
        return None
    if rule == "TRANS":
        t, u, v = bindings.get("t"), bindings.get("u"), bindings.get("v")
        if not all(isinstance(x, Term) for x in (t, u, v)):
            return "TRANS bindings must be terms"
        if (lhs, rhs) != (t, v):
            return "TRANS conclusion does not match its bindings"
        if (t, u) not in seen:
            return "TRANS first premise not previously concluded"
        if (u, v) not in seen:
            return "TRANS second premise not previously concluded"
        return None
    if rule == "CONTEXT":
        tag = bindings.get("f")
        if tag == OP_PREFIX:
            op: Op = (OP_PREFIX, bindings.get("a"))
        elif tag == OP_PAR:
            op = (OP_PAR, bindings.get("A"))
        elif tag in (OP_EXT, OP_CONJ, OP_DISJ):
            op = (tag,)
        else:
            return f"CONTEXT has unknown operator {tag!r}"
        arity = op_arity(op)
        kids_l, kids_r = [], []
        for i in range(1, arity + 1):
            tl, tr = bindings.get(f"t{i}"), bindings.get(f"u{i}")
            if not isinstance(tl, Term) or not isinstance(tr, Term):
                return f"CONTEXT operand {i} missing"
            kids_l.append(tl)
            kids_r.append(tr)
        try:
            built = (apply_op(op, kids_l), apply_op(op, kids_r))
        except (ValueError, TypeError) as exc:
            return f"CONTEXT operator malformed: {exc}"
        if (lhs, rhs) != built:
            return "CONTEXT conclusion does not match its operands"
        for tl, tr in zip(kids_l, kids_r):
            if (tl, tr) not in seen:
                return "CONTEXT premise not previously concluded"
        return None
    schema = AXIOM_SCHEMAS.get(rule)
    if schema is None:
        return f"unknown rule {rule!r}"
    try:
        inst_l, inst_r = schema.instantiate(bindings)
    except SchemaError as exc:
        return str(exc)
    if (lhs, rhs) == (inst_l, inst_r):
        return None
    if schema.kind == "eq" and (lhs, rhs) == (inst_r, inst_l):
        return None
    return f"conclusion is not the {rule} instance of its bindings"


def validate_trace(trace: ProofTrace) -> bool:
    """True iff every step checks out and the steps establish the goal."""
    return trace_violation(trace) is None
