"""Normal forms: bottom, or a disjunction of prefix-injective external choices.

A ``Branch`` is one disjunct: an ordered tuple of (visible action, body)
summands with pairwise distinct actions, sorted by action name.  Bodies are
again normal forms and never bottom (a summand with bottom body collapses the
whole branch during normalization).  The empty branch represents 0.

``DisjNF`` keeps its branches sorted by the canonical term order of their
reifications and free of duplicates, so structurally equal normal forms
compare equal and normalization output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..terms import Term, gen_choice, gen_disj, bot, prefix

Branch = tuple[tuple[str, "NormalForm"], ...]


@dataclass(frozen=True)
class BotNF:
    """The inconsistent normal form."""

    def __repr__(self) -> str:
        return "BotNF"


@dataclass(frozen=True)
class DisjNF:
    """A nonempty disjunction of prefix-injective external choices."""

    branches: tuple[Branch, ...]

    def __repr__(self) -> str:
        return f"DisjNF({reify(self)!r})"


NormalForm = Union[BotNF, DisjNF]

BOT_NF = BotNF()
ZERO_NF = DisjNF(((),))


def single_branch(branch: Branch) -> DisjNF:
    return DisjNF((branch,))


def reify_branch(branch: Branch) -> Term:
    """The external-choice term a branch denotes (0 when empty)."""
    return gen_choice(prefix(a, reify(body)) for a, body in branch)


def reify(nf: NormalForm) -> Term:
    """The process term a normal form denotes."""
    if isinstance(nf, BotNF):
        return bot()
    return gen_disj(reify_branch(b) for b in nf.branches)


def sort_branches(branches) -> tuple[Branch, ...]:
    """Canonically ordered, duplicate-free branch tuple."""
    seen = set()
    out = []
    for b in sorted(branches, key=lambda b: reify_branch(b).key()):
        if b not in seen:
            seen.add(b)
            out.append(b)
    return tuple(out)


def normal_form_violation(nf: NormalForm) -> str | None:
    """Structural validity: describes the first defect, or None."""
    if isinstance(nf, BotNF):
        return None
    if not isinstance(nf, DisjNF):
        return f"not a normal form: {nf!r}"
    if not nf.branches:
        return "empty disjunction"
    if nf.branches != sort_branches(nf.branches):
        return "branches not in canonical order or duplicated"
    for branch in nf.branches:
        actions = [a for a, _ in branch]
        if len(set(actions)) != len(actions):
            return f"branch not injective in prefixes: {actions}"
        if actions != sorted(actions):
            return f"branch summands not sorted: {actions}"
        for a, body in branch:
            if a == "tau":
                return "tau prefix inside a normal form"
            if isinstance(body, BotNF):
                return "bottom body inside a branch"
            inner = normal_form_violation(body)
            if inner is not None:
                return inner
    return None


def is_valid_normal_form(nf: NormalForm) -> bool:
    return normal_form_violation(nf) is None
