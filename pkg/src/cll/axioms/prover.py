"""Deciding inequations: normal-form comparison and the end-to-end prover.

Two normal forms compare by branch embedding: bottom is below everything; a
disjunction is below another when each of its branches embeds into some
branch of the other, where branches embed when they offer exactly the same
actions and, summand by summand, every disjunct of the left body embeds into
some disjunct of the right body.  On success the comparison emits a trace
that introduces the chosen disjunct (DI1/DI2/DI5), recurses through prefixes
and choices by congruence, and collapses the left branches with DI3.

``prove`` decides the refinement semantically first and, when it holds,
glues ``t = nf(t)``, ``nf(t) <= nf(s)`` and ``nf(s) = s`` with TRANS; the
trace always exists in that case because every semantically valid inequation
between normal forms embeds.
"""

from __future__ import annotations

from ..refinement import RefinementChecker
from ..terms import BOT_TERM, NIL_TERM, Term, disj
from .normal_form import (
    BOT_NF, Branch, BotNF, DisjNF, NormalForm, normal_form_violation,
    reify, reify_branch, single_branch,
)
from .rewrite import _DISJ, _merge_branches, _nf_conjoin, _nf_parallel, _normalize
from .trace import Le, ProofTrace, TraceBuilder


# --- decision -----------------------------------------------------------------

def nf_le_holds(x: NormalForm, y: NormalForm, memo: dict | None = None) -> bool:
    """Branch-embedding order on normal forms (the denoted refinement)."""
    if memo is None:
        memo = {}
    if isinstance(x, BotNF):
        return True
    if isinstance(y, BotNF):
        return False
    key = (x, y)
    cached = memo.get(key)
    if cached is None:
        cached = all(
            any(_branch_le(bx, by, memo) for by in y.branches)
            for bx in x.branches
        )
        memo[key] = cached
    return cached


def _branch_le(bx: Branch, by: Branch, memo: dict) -> bool:
    if [a for a, _ in bx] != [a for a, _ in by]:
        return False
    return all(
        nf_le_holds(u, v, memo) for (_, u), (_, v) in zip(bx, by)
    )


# --- certificate construction ---------------------------------------------------

def _disjunct_intro(b: TraceBuilder, items: list[Term], j: int) -> Le:
    """items[j] <= tree_disj(items)."""
    if len(items) == 1:
        return b.ref(items[0])
    if j == 0:
        acc: Le | None = None
        grown = items[0]
    else:
        prefix_tree = _DISJ.tree(items[:j])
        le = b.axiom("DI5", x=items[j], y=prefix_tree)
        flip = b.axiom("DI1", x=items[j], y=prefix_tree)
        acc = b.le_chain(le, flip.fwd)
        grown = _DISJ.tree(items[:j + 1])
    for m in range(max(j, 0) + 1, len(items)):
        step = b.axiom("DI5", x=grown, y=items[m])
        acc = step if acc is None else b.trans(acc, step)
        grown = disj(grown, items[m])
    assert acc is not None
    return acc


def _le_branch(b: TraceBuilder, bx: Branch, by: Branch, memo: dict) -> Le:
    if not bx:
        return b.ref(NIL_TERM)
    links = [
        b.context(("prefix", a), [_le_nf(b, u, v, memo)])
        for (a, u), (_, v) in zip(bx, by)
    ]
    acc = links[0]
    for link in links[1:]:
        acc = b.context(("ext",), [acc, link])
    return acc


def _le_nf(b: TraceBuilder, x: NormalForm, y: NormalForm, memo: dict) -> Le:
    """reify(x) <= reify(y); caller guarantees nf_le_holds(x, y)."""
    if isinstance(x, BotNF):
        if isinstance(y, BotNF):
            return b.ref(BOT_TERM)
        target = reify(y)
        le = b.axiom("DI5", x=BOT_TERM, y=target)
        flip = b.axiom("DI1", x=BOT_TERM, y=target)
        drop = b.axiom("DI4", x=target)
        return b.le_chain(le, flip.fwd, drop.fwd)
    assert isinstance(y, DisjNF)
    y_terms = [reify_branch(c) for c in y.branches]
    target = reify(y)
    links = []
    for bx in x.branches:
        j = next(
            j for j, by in enumerate(y.branches) if _branch_le(bx, by, memo)
        )
        l1 = _le_branch(b, bx, y.branches[j], memo)
        l2 = _disjunct_intro(b, y_terms, j)
        links.append(b.le_chain(l1, l2))
    acc = links[0]
    for link in links[1:]:
        both = b.context(("disj",), [acc, link])
        collapse = b.axiom("DI3", x=target)
        acc = b.le_chain(both, collapse.fwd)
    return acc


# --- public operations -----------------------------------------------------------

def normalize(t: Term) -> tuple[NormalForm, ProofTrace]:
    """Normal form of t plus a trace proving t equal to its reification."""
    b = TraceBuilder()
    nf, _ = _normalize(b, t, {})
    return nf, b.finish(t, reify(nf), "eq")


def _require_disj(nf: NormalForm, what: str) -> DisjNF:
    if isinstance(nf, BotNF):
        raise ValueError(f"{what} does not accept the bottom normal form")
    violation = normal_form_violation(nf)
    if violation is not None:
        raise ValueError(f"{what}: invalid normal form: {violation}")
    return nf


def nf_conjoin(x: NormalForm, y: NormalForm) -> tuple[NormalForm, ProofTrace]:
    """Normal form of reify(x) /\\ reify(y), with trace; inputs not bottom."""
    dx = _require_disj(x, "nf_conjoin")
    dy = _require_disj(y, "nf_conjoin")
    b = TraceBuilder()
    nf, eq = _nf_conjoin(b, dx, dy, {})
    return nf, b.finish(eq.lhs, eq.rhs, "eq")


def nf_parallel(x: NormalForm, y: NormalForm, sync: frozenset[str]
                ) -> tuple[NormalForm, ProofTrace]:
    """Normal form of reify(x) |[sync]| reify(y), with trace; inputs not bottom."""
    dx = _require_disj(x, "nf_parallel")
    dy = _require_disj(y, "nf_parallel")
    b = TraceBuilder()
    nf, eq = _nf_parallel(b, dx, dy, frozenset(sync), {})
    return nf, b.finish(eq.lhs, eq.rhs, "eq")


def nf_ec_merge(x: NormalForm, y: NormalForm) -> tuple[NormalForm, ProofTrace]:
    """Merge two single-branch normal forms under external choice."""
    dx = _require_disj(x, "nf_ec_merge")
    dy = _require_disj(y, "nf_ec_merge")
    if len(dx.branches) != 1 or len(dy.branches) != 1:
        raise ValueError("nf_ec_merge expects single-branch normal forms")
    b = TraceBuilder()
    merged, eq = _merge_branches(b, dx.branches[0], dy.branches[0])
    return single_branch(merged), b.finish(eq.lhs, eq.rhs, "eq")


def nf_leq(x: NormalForm, y: NormalForm) -> tuple[bool, ProofTrace | None]:
    """Branch-embedding comparison; on success also a trace of the inequation."""
    for nf in (x, y):
        violation = normal_form_violation(nf)
        if violation is not None:
            raise ValueError(f"nf_leq: invalid normal form: {violation}")
    memo: dict = {}
    if not nf_le_holds(x, y, memo):
        return False, None
    b = TraceBuilder()
    _le_nf(b, x, y, memo)
    return True, b.finish(reify(x), reify(y), "le")


def prove(t: Term, s: Term, checker: RefinementChecker | None = None
          ) -> tuple[bool, ProofTrace | None]:
    """Derive t <= s in the axiom system; succeeds iff the refinement holds."""
    checker = checker or RefinementChecker()
    if not checker.ready_sim_preorder(t, s).holds:
        return False, None
    b = TraceBuilder()
    memo: dict = {}
    nx, ex = _normalize(b, t, memo)
    ny, ey = _normalize(b, s, memo)
    le_memo: dict = {}
    if not nf_le_holds(nx, ny, le_memo):
        raise AssertionError(
            f"refinement holds but normal forms do not embed: {t!r} vs {s!r}")
    le = _le_nf(b, nx, ny, le_memo)
    b.le_chain(ex.fwd, le, ey.bwd)
    return True, b.finish(t, s, "le")
