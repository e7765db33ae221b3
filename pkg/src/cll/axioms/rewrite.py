"""Proof-producing normalization.

Every rewriting helper returns both the rewritten structure and an equation
handle whose two directions are already concluded in the shared trace
builder, so the final trace certifies `input = reified-output` end to end.

The shape of the computation follows the operators: prefixes collapse bottom
bodies and strip tau; disjunction unions branch lists; external choice,
conjunction and parallel first distribute over the branch lists (DS1-DS3 with
the derived converse), then combine branches pairwise: choices merge their
summand lists (colliding prefixes fuse through the derived a.x [] a.y =
a.(x \\/ y)), conjunctions align summands (ECC1-ECC3) and recurse into the
bodies, parallels expand (EXP1/EXP2) and recurse.  Branch lists and summand
lists are kept canonically sorted and duplicate-free throughout.
"""

from __future__ import annotations

from typing import Callable, Sequence

from ..terms import (
    BOT, CONJ, DISJ, EXT, NIL, PAR, PREFIX, TAU,
    BOT_TERM, NIL_TERM, Term, action_key, disj, prefix,
)
from .normal_form import (
    BOT_NF, ZERO_NF, Branch, BotNF, DisjNF, NormalForm,
    reify, reify_branch, single_branch, sort_branches,
)
from .trace import Eq, Le, Op, TraceBuilder, apply_op


class _AcOps:
    """Trace-level algebra of one associative/commutative/idempotent operator."""

    def __init__(self, op: Op, comm: str, assoc: str, assoc_groups_lhs: bool,
                 idem: str):
        self.op = op
        self.comm = comm
        self.assoc = assoc
        self.assoc_groups_lhs = assoc_groups_lhs
        self.idem = idem

    def tree(self, items: Sequence[Term]) -> Term:
        if not items:
            if self.op[0] == "ext":
                return NIL_TERM
            raise ValueError("empty tree")
        acc = items[0]
        for item in items[1:]:
            acc = apply_op(self.op, [acc, item])
        return acc


_DISJ = _AcOps(("disj",), "DI1", "DI2", False, "DI3")
_EXT = _AcOps(("ext",), "EC1", "EC2", True, "EC3")


def _assoc_left(b: TraceBuilder, ops: _AcOps, x: Term, y: Term, z: Term) -> Eq:
    """x (.) (y (.) z)  =  (x (.) y) (.) z."""
    e = b.axiom(ops.assoc, x=x, y=y, z=z)
    return b.eq_sym(e) if ops.assoc_groups_lhs else e


def _lift(b: TraceBuilder, ops: _AcOps, inner: Eq, suffix: Sequence[Term]) -> Eq:
    for s in suffix:
        inner = b.eq_context(ops.op, [inner, b.eq_refl(s)])
    return inner


def _eq_concat(b: TraceBuilder, ops: _AcOps, left: Sequence[Term],
               right: Sequence[Term]) -> Eq:
    """tree(left) (.) tree(right) = tree(left + right); both nonempty."""
    if len(right) == 1:
        return b.eq_refl(apply_op(ops.op, [ops.tree(left), right[0]]))
    e1 = _assoc_left(b, ops, ops.tree(left), ops.tree(right[:-1]), right[-1])
    rec = _eq_concat(b, ops, left, right[:-1])
    e2 = b.eq_context(ops.op, [rec, b.eq_refl(right[-1])])
    return b.eq_trans(e1, e2)


def _eq_swap(b: TraceBuilder, ops: _AcOps, items: list[Term], i: int) -> Eq:
    """Swap items[i] and items[i+1] inside the left-nested tree."""
    x, y = items[i], items[i + 1]
    if i == 0:
        inner = b.axiom(ops.comm, x=x, y=y)
    else:
        p = ops.tree(items[:i])
        e1 = b.eq_sym(_assoc_left(b, ops, p, x, y))
        e2 = b.eq_context(ops.op, [b.eq_refl(p), b.axiom(ops.comm, x=x, y=y)])
        e3 = _assoc_left(b, ops, p, y, x)
        inner = b.eq_trans(e1, e2, e3)
    return _lift(b, ops, inner, items[i + 2:])


def _eq_sort(b: TraceBuilder, ops: _AcOps, items: list, term_of: Callable,
             key: Callable) -> tuple[list, Eq]:
    """Bubble-sort the item list, threading swap proofs over the terms."""
    cur = list(items)
    total = b.eq_refl(ops.tree([term_of(it) for it in cur]))
    swapped = True
    while swapped:
        swapped = False
        for i in range(len(cur) - 1):
            if key(cur[i]) > key(cur[i + 1]):
                e = _eq_swap(b, ops, [term_of(it) for it in cur], i)
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                total = b.eq_trans(total, e)
                swapped = True
    return cur, total


def _eq_dedup(b: TraceBuilder, ops: _AcOps, items: list, term_of: Callable
              ) -> tuple[list, Eq]:
    """Collapse adjacent identical terms via the idempotence axiom."""
    cur = list(items)
    total = b.eq_refl(ops.tree([term_of(it) for it in cur]))
    i = 0
    while i < len(cur) - 1:
        terms = [term_of(it) for it in cur]
        x = terms[i]
        if x is terms[i + 1]:
            if i == 0:
                inner = b.axiom(ops.idem, x=x)
            else:
                p = ops.tree(terms[:i])
                e1 = b.eq_sym(_assoc_left(b, ops, p, x, x))
                e2 = b.eq_context(ops.op, [b.eq_refl(p), b.axiom(ops.idem, x=x)])
                inner = b.eq_trans(e1, e2)
            total = b.eq_trans(total, _lift(b, ops, inner, terms[i + 2:]))
            del cur[i + 1]
        else:
            i += 1
    return cur, total


def _eq_map(b: TraceBuilder, ops: _AcOps, eqs: Sequence[Eq]) -> Eq:
    """Pointwise rewriting of every tree element."""
    acc = eqs[0]
    for e in eqs[1:]:
        acc = b.eq_context(ops.op, [acc, e])
    return acc


def _eq_splice_pair(b: TraceBuilder, ops: _AcOps, terms: list[Term], i: int,
                    pair_eq: Eq) -> Eq:
    """Rewrite elements i, i+1 into one element using Eq(t_i (.) t_{i+1}, m)."""
    if i == 0:
        inner = pair_eq
    else:
        p = ops.tree(terms[:i])
        e1 = b.eq_sym(_assoc_left(b, ops, p, terms[i], terms[i + 1]))
        e2 = b.eq_context(ops.op, [b.eq_refl(p), pair_eq])
        inner = b.eq_trans(e1, e2)
    return _lift(b, ops, inner, terms[i + 2:])


def _eq_drop_bot_disj(b: TraceBuilder, items: list, term_of: Callable
                      ) -> tuple[list, Eq]:
    """Remove bottom disjuncts while more than one disjunct remains."""
    cur = list(items)
    total = b.eq_refl(_DISJ.tree([term_of(it) for it in cur]))
    while len(cur) > 1:
        terms = [term_of(it) for it in cur]
        try:
            i = terms.index(BOT_TERM)
        except ValueError:
            break
        if i == 0:
            e1 = b.axiom("DI1", x=BOT_TERM, y=terms[1])
            e2 = b.axiom("DI4", x=terms[1])
            inner = b.eq_trans(e1, e2)
            total = b.eq_trans(total, _lift(b, _DISJ, inner, terms[2:]))
            del cur[0]
        else:
            e = b.axiom("DI4", x=_DISJ.tree(terms[:i]))
            total = b.eq_trans(total, _lift(b, _DISJ, e, terms[i + 1:]))
            del cur[i]
    return cur, total


def _eq_collapse_bot_ext(b: TraceBuilder, terms: list[Term]) -> Eq:
    """tree of summands containing bottom = bottom (choice absorbs bottom)."""
    i = terms.index(BOT_TERM)
    if i == 0:
        cur = b.eq_refl(BOT_TERM)
    else:
        cur = b.axiom("EC5", x=_EXT.tree(terms[:i]))
    for s in terms[i + 1:]:
        step = b.eq_context(_EXT.op, [cur, b.eq_refl(s)])
        comm = b.axiom("EC1", x=BOT_TERM, y=s)
        absorb = b.axiom("EC5", x=s)
        cur = b.eq_trans(step, comm, absorb)
    return cur


# --- distribution over disjunction ---------------------------------------------


def _le_dis_converse(b: TraceBuilder, big: Op, x: Term, y: Term, z: Term) -> Le:
    """(x (.) y) \\/ (x (.) z)  <=  x (.) (y \\/ z), derived from DI1/DI3/DI5."""
    l1 = b.axiom("DI5", x=y, y=z)
    l2 = b.axiom("DI5", x=z, y=y)
    e3 = b.axiom("DI1", x=z, y=y)
    l4 = b.le_chain(l2, e3.fwd)
    r = b.ref(x)
    l5 = b.context(big, [r, l1])
    l6 = b.context(big, [r, l4])
    l7 = b.context(("disj",), [l5, l6])
    target = apply_op(big, [x, disj(y, z)])
    e8 = b.axiom("DI3", x=target)
    return b.le_chain(l7, e8.fwd)


_DS_AXIOM = {"ext": "DS1", "conj": "DS2", "par": "DS3"}
_COMM_AXIOM = {"ext": "EC1", "conj": "CO1", "par": "PA1"}


def _big_kwargs(big: Op) -> dict:
    return {"A": big[1]} if big[0] == "par" else {}


def _eq_distribute(b: TraceBuilder, big: Op, x: Term, items: Sequence[Term]) -> Eq:
    """x (.) tree_disj(items) = tree_disj([x (.) c for c in items])."""
    if len(items) == 1:
        return b.eq_refl(apply_op(big, [x, items[0]]))
    y, z = _DISJ.tree(items[:-1]), items[-1]
    fwd = b.axiom(_DS_AXIOM[big[0]], x=x, y=y, z=z, **_big_kwargs(big))
    bwd = _le_dis_converse(b, big, x, y, z)
    e1 = Eq(fwd.lhs, fwd.rhs)
    rec = _eq_distribute(b, big, x, items[:-1])
    e2 = b.eq_context(("disj",), [rec, b.eq_refl(apply_op(big, [x, z]))])
    assert bwd.rhs is fwd.lhs
    return b.eq_trans(e1, e2)


def _eq_bilinear(b: TraceBuilder, big: Op, xs: list, ys: list, term_of: Callable
                 ) -> tuple[list[tuple], Eq]:
    """tree_disj(xs) (.) tree_disj(ys) = tree_disj of all pairwise products.

    Returns the (x_item, y_item) pair list aligned with the product order.
    """
    x_terms = [term_of(it) for it in xs]
    y_terms = [term_of(it) for it in ys]
    tx = _DISJ.tree(x_terms)
    e1 = _eq_distribute(b, big, tx, y_terms)
    comm = _COMM_AXIOM[big[0]]
    per_y_eqs: list[Eq] = []
    lists: list[list[Term]] = []
    for yt in y_terms:
        if len(x_terms) == 1:
            per_y_eqs.append(b.eq_refl(apply_op(big, [tx, yt])))
            lists.append([apply_op(big, [x_terms[0], yt])])
            continue
        c1 = b.axiom(comm, x=tx, y=yt, **_big_kwargs(big))
        c2 = _eq_distribute(b, big, yt, x_terms)
        flips = [
            b.eq_sym(b.axiom(comm, x=xt, y=yt, **_big_kwargs(big)))
            for xt in x_terms
        ]
        c3 = _eq_map(b, _DISJ, flips)
        per_y_eqs.append(b.eq_trans(c1, c2, c3))
        lists.append([apply_op(big, [xt, yt]) for xt in x_terms])
    e2 = _eq_map(b, _DISJ, per_y_eqs)
    # Flatten the tree of per-y trees into one flat tree.
    cur_lists = lists
    total = b.eq_trans(e1, e2)
    while len(cur_lists) > 1:
        e = _eq_concat(b, _DISJ, cur_lists[0], cur_lists[1])
        e = _lift(b, _DISJ, e, [_DISJ.tree(L) for L in cur_lists[2:]])
        total = b.eq_trans(total, e)
        cur_lists = [cur_lists[0] + cur_lists[1]] + cur_lists[2:]
    pairs = [(x_it, y_it) for y_it in ys for x_it in xs]
    return pairs, total


# --- branch-level operations -----------------------------------------------------


def _le_sp3(b: TraceBuilder, action: str, u: Term, v: Term) -> Le:
    """a.u [] a.v <= a.(u \\/ v), derived from DI1/DI5/EC3."""
    l1 = b.axiom("DI5", x=u, y=v)
    l2 = b.axiom("DI5", x=v, y=u)
    e3 = b.axiom("DI1", x=v, y=u)
    l4 = b.le_chain(l2, e3.fwd)
    l5 = b.context(("prefix", action), [l1])
    l6 = b.context(("prefix", action), [l4])
    l7 = b.context(("ext",), [l5, l6])
    e8 = b.axiom("EC3", x=prefix(action, disj(u, v)))
    return b.le_chain(l7, e8.fwd)


def _nf_disj_union(b: TraceBuilder, x: DisjNF, y: DisjNF) -> tuple[DisjNF, Eq]:
    """reify(x) \\/ reify(y) = reify(union of the branch lists)."""
    items = [(reify_branch(br), br) for br in x.branches + y.branches]
    e1 = _eq_concat(b, _DISJ, [t for t, _ in items[:len(x.branches)]],
                    [t for t, _ in items[len(x.branches):]])
    items, e2 = _eq_sort(b, _DISJ, items, lambda it: it[0],
                         lambda it: it[0].key())
    items, e3 = _eq_dedup(b, _DISJ, items, lambda it: it[0])
    return DisjNF(tuple(br for _, br in items)), b.eq_trans(e1, e2, e3)


def _merge_branches(b: TraceBuilder, left: Branch, right: Branch
                    ) -> tuple[Branch, Eq]:
    """reify(left) [] reify(right) = reify(merged), merged injective."""
    lt, rt = reify_branch(left), reify_branch(right)
    if not left and not right:
        return (), b.axiom("EC4", x=NIL_TERM)
    if not left:
        e1 = b.axiom("EC1", x=NIL_TERM, y=rt)
        e2 = b.axiom("EC4", x=rt)
        return right, b.eq_trans(e1, e2)
    if not right:
        return left, b.axiom("EC4", x=lt)
    items: list[tuple[str, NormalForm]] = list(left) + list(right)
    terms = [prefix(a, reify(body)) for a, body in items]
    total = _eq_concat(b, _EXT, terms[:len(left)], terms[len(left):])
    pairs = list(zip(terms, items))
    pairs, e_sort = _eq_sort(
        b, _EXT, pairs, lambda it: it[0],
        lambda it: (action_key(it[1][0]), it[0].key()))
    total = b.eq_trans(total, e_sort)
    i = 0
    while i < len(pairs) - 1:
        (t1, (a1, body1)) = pairs[i]
        (t2, (a2, body2)) = pairs[i + 1]
        if a1 == a2:
            u, v = reify(body1), reify(body2)
            sp3 = _le_sp3(b, a1, u, v)
            ds4 = b.axiom("DS4", a=a1, x=u, y=v)
            pair_eq = Eq(sp3.lhs, sp3.rhs)
            assert ds4.lhs is sp3.rhs and ds4.rhs is sp3.lhs
            union, e_body = _nf_disj_union(b, body1, body2)
            e_pref = b.eq_context(("prefix", a1), [e_body])
            elem_eq = b.eq_trans(pair_eq, e_pref)
            total = b.eq_trans(
                total, _eq_splice_pair(b, _EXT, [t for t, _ in pairs], i, elem_eq))
            pairs[i] = (prefix(a1, reify(union)), (a1, union))
            del pairs[i + 1]
        else:
            i += 1
    return tuple(it for _, it in pairs), total


def _branch_bindings(left: Branch, right: Branch) -> dict:
    bind: dict[str, object] = {"n": len(left), "m": len(right)}
    for i, (a, body) in enumerate(left):
        bind[f"a{i}"] = a
        bind[f"x{i}"] = reify(body)
    for j, (a, body) in enumerate(right):
        bind[f"b{j}"] = a
        bind[f"y{j}"] = reify(body)
    return bind


def _conj_branch_pair(b: TraceBuilder, left: Branch, right: Branch,
                      memo: dict) -> tuple[Branch | None, Eq]:
    """Conjunction of two branches: a merged branch, or None for bottom."""
    if {a for a, _ in left} != {a for a, _ in right}:
        return None, b.axiom("ECC1", **_branch_bindings(left, right))
    if not left:
        return (), b.axiom("CO3", x=NIL_TERM)
    bind: dict[str, object] = {"n": len(left)}
    for i, ((a, body_l), (_, body_r)) in enumerate(zip(left, right)):
        bind[f"a{i}"] = a
        bind[f"x{i}"] = reify(body_l)
        bind[f"y{i}"] = reify(body_r)
    ecc3 = b.axiom("ECC3", **bind)
    ecc2 = b.axiom("ECC2", **bind)
    assert ecc2.lhs is ecc3.rhs and ecc2.rhs is ecc3.lhs
    aligned = Eq(ecc3.lhs, ecc3.rhs)
    elem_eqs: list[Eq] = []
    out: list[tuple[str, NormalForm]] = []
    elem_terms: list[Term] = []
    saw_bot = False
    for (a, body_l), (_, body_r) in zip(left, right):
        w, e_body = _nf_conjoin(b, body_l, body_r, memo)
        e = b.eq_context(("prefix", a), [e_body])
        if isinstance(w, BotNF):
            e = b.eq_trans(e, b.axiom("PR1", a=a))
            elem_terms.append(BOT_TERM)
            saw_bot = True
        else:
            elem_terms.append(prefix(a, reify(w)))
            out.append((a, w))
        elem_eqs.append(e)
    e_map = _eq_map(b, _EXT, elem_eqs)
    total = b.eq_trans(aligned, e_map)
    if saw_bot:
        return None, b.eq_trans(total, _eq_collapse_bot_ext(b, elem_terms))
    return tuple(out), total


def _par_branch_pair(b: TraceBuilder, left: Branch, right: Branch,
                     sync: frozenset[str], memo: dict) -> tuple[Branch, Eq]:
    """Parallel composition of two branches via the expansion axioms."""
    bind = _branch_bindings(left, right)
    bind["A"] = sync
    exp1 = b.axiom("EXP1", **bind)
    exp2 = b.axiom("EXP2", **bind)
    assert exp2.lhs is exp1.rhs and exp2.rhs is exp1.lhs
    expanded = Eq(exp1.lhs, exp1.rhs)

    right_nf = single_branch(right)
    left_nf = single_branch(left)

    def group_eq(summands: list[tuple[str, NormalForm, Eq]]
                 ) -> tuple[Branch, Eq]:
        if not summands:
            return (), b.eq_refl(NIL_TERM)
        eqs = [e for _, _, e in summands]
        return tuple((a, w) for a, w, _ in summands), _eq_map(b, _EXT, eqs)

    g1: list[tuple[str, NormalForm, Eq]] = []
    for a, body in left:
        if a not in sync:
            w, e = _nf_parallel(b, body, right_nf, sync, memo)
            g1.append((a, w, b.eq_context(("prefix", a), [e])))
    g2: list[tuple[str, NormalForm, Eq]] = []
    for a, body in right:
        if a not in sync:
            w, e = _nf_parallel(b, left_nf, body, sync, memo)
            g2.append((a, w, b.eq_context(("prefix", a), [e])))
    g3: list[tuple[str, NormalForm, Eq]] = []
    for a, body_l in left:
        if a in sync:
            for a2, body_r in right:
                if a2 == a:
                    w, e = _nf_parallel(b, body_l, body_r, sync, memo)
                    g3.append((a, w, b.eq_context(("prefix", a), [e])))

    br1, e1 = group_eq(g1)
    br2, e2 = group_eq(g2)
    br3, e3 = group_eq(g3)
    e_inner = b.eq_context(("ext",), [b.eq_context(("ext",), [e1, e2]), e3])
    m12, e12 = _merge_branches(b, br1, br2)
    e12_lift = b.eq_context(("ext",), [e12, b.eq_refl(reify_branch(br3))])
    merged, e_final = _merge_branches(b, m12, br3)
    return merged, b.eq_trans(expanded, e_inner, e12_lift, e_final)


# --- normal-form level operations -------------------------------------------------


def _assemble_disj(b: TraceBuilder, items: list[tuple[Term, Branch]]
                   ) -> tuple[DisjNF, Eq]:
    """Sorted duplicate-free disjunction of branches; Eq from the given tree."""
    items, e_sort = _eq_sort(b, _DISJ, items, lambda it: it[0],
                             lambda it: it[0].key())
    items, e_dedup = _eq_dedup(b, _DISJ, items, lambda it: it[0])
    return DisjNF(tuple(br for _, br in items)), b.eq_trans(e_sort, e_dedup)


def _nf_ext(b: TraceBuilder, x: DisjNF, y: DisjNF, memo: dict
            ) -> tuple[DisjNF, Eq]:
    key = ("ext", x, y)
    if key in memo:
        return memo[key]
    pairs, e_bil = _eq_bilinear(b, ("ext",), list(x.branches), list(y.branches),
                                reify_branch)
    elem_eqs: list[Eq] = []
    items: list[tuple[Term, Branch]] = []
    for bx, by in pairs:
        merged, e = _merge_branches(b, bx, by)
        elem_eqs.append(e)
        items.append((reify_branch(merged), merged))
    e_map = _eq_map(b, _DISJ, elem_eqs)
    nf, e_fin = _assemble_disj(b, items)
    result = (nf, b.eq_trans(e_bil, e_map, e_fin))
    memo[key] = result
    return result


def _nf_conjoin(b: TraceBuilder, x: DisjNF, y: DisjNF, memo: dict
                ) -> tuple[NormalForm, Eq]:
    key = ("conj", x, y)
    if key in memo:
        return memo[key]
    pairs, e_bil = _eq_bilinear(b, ("conj",), list(x.branches), list(y.branches),
                                reify_branch)
    elem_eqs: list[Eq] = []
    items: list[tuple[Term, Branch | None]] = []
    for bx, by in pairs:
        merged, e = _conj_branch_pair(b, bx, by, memo)
        elem_eqs.append(e)
        items.append((BOT_TERM if merged is None else reify_branch(merged), merged))
    e_map = _eq_map(b, _DISJ, elem_eqs)
    kept, e_drop = _eq_drop_bot_disj(b, items, lambda it: it[0])
    total = b.eq_trans(e_bil, e_map, e_drop)
    if len(kept) == 1 and kept[0][1] is None:
        result: tuple[NormalForm, Eq] = (BOT_NF, total)
    else:
        nf, e_fin = _assemble_disj(b, kept)
        result = (nf, b.eq_trans(total, e_fin))
    memo[key] = result
    return result


def _nf_parallel(b: TraceBuilder, x: DisjNF, y: DisjNF, sync: frozenset[str],
                 memo: dict) -> tuple[DisjNF, Eq]:
    key = ("par", x, y, sync)
    if key in memo:
        return memo[key]
    pairs, e_bil = _eq_bilinear(b, ("par", sync), list(x.branches),
                                list(y.branches), reify_branch)
    elem_eqs: list[Eq] = []
    items: list[tuple[Term, Branch]] = []
    for bx, by in pairs:
        merged, e = _par_branch_pair(b, bx, by, sync, memo)
        elem_eqs.append(e)
        items.append((reify_branch(merged), merged))
    e_map = _eq_map(b, _DISJ, elem_eqs)
    nf, e_fin = _assemble_disj(b, items)
    result = (nf, b.eq_trans(e_bil, e_map, e_fin))
    memo[key] = result
    return result


def _normalize(b: TraceBuilder, t: Term, memo: dict) -> tuple[NormalForm, Eq]:
    if t in memo:
        return memo[t]
    kind = t.kind
    if kind == NIL:
        result: tuple[NormalForm, Eq] = (ZERO_NF, b.eq_refl(t))
    elif kind == BOT:
        result = (BOT_NF, b.eq_refl(t))
    elif kind == PREFIX:
        inner, e_in = _normalize(b, t.left, memo)
        lifted = b.eq_context(("prefix", t.action), [e_in])
        if isinstance(inner, BotNF):
            if t.action == TAU:
                e = b.axiom("PR2", x=BOT_TERM)
            else:
                e = b.axiom("PR1", a=t.action)
            result = (BOT_NF, b.eq_trans(lifted, e))
        elif t.action == TAU:
            e = b.axiom("PR2", x=reify(inner))
            result = (inner, b.eq_trans(lifted, e))
        else:
            result = (single_branch(((t.action, inner),)), lifted)
    else:
        nl, el = _normalize(b, t.left, memo)
        nr, er = _normalize(b, t.right, memo)
        if kind == DISJ:
            lifted = b.eq_context(("disj",), [el, er])
            if isinstance(nl, BotNF) and isinstance(nr, BotNF):
                result = (BOT_NF, b.eq_trans(lifted, b.axiom("DI4", x=BOT_TERM)))
            elif isinstance(nr, BotNF):
                result = (nl, b.eq_trans(lifted, b.axiom("DI4", x=reify(nl))))
            elif isinstance(nl, BotNF):
                e1 = b.axiom("DI1", x=BOT_TERM, y=reify(nr))
                e2 = b.axiom("DI4", x=reify(nr))
                result = (nr, b.eq_trans(lifted, e1, e2))
            else:
                union, e = _nf_disj_union(b, nl, nr)
                result = (union, b.eq_trans(lifted, e))
        elif kind == EXT:
            lifted = b.eq_context(("ext",), [el, er])
            if isinstance(nr, BotNF):
                e = b.axiom("EC5", x=reify(nl))
                result = (BOT_NF, b.eq_trans(lifted, e))
            elif isinstance(nl, BotNF):
                e1 = b.axiom("EC1", x=BOT_TERM, y=reify(nr))
                e2 = b.axiom("EC5", x=reify(nr))
                result = (BOT_NF, b.eq_trans(lifted, e1, e2))
            else:
                nf, e = _nf_ext(b, nl, nr, memo)
                result = (nf, b.eq_trans(lifted, e))
        elif kind == CONJ:
            lifted = b.eq_context(("conj",), [el, er])
            if isinstance(nr, BotNF):
                e = b.axiom("CO4", x=reify(nl))
                result = (BOT_NF, b.eq_trans(lifted, e))
            elif isinstance(nl, BotNF):
                e1 = b.axiom("CO1", x=BOT_TERM, y=reify(nr))
                e2 = b.axiom("CO4", x=reify(nr))
                result = (BOT_NF, b.eq_trans(lifted, e1, e2))
            else:
                nf, e = _nf_conjoin(b, nl, nr, memo)
                result = (nf, b.eq_trans(lifted, e))
        else:  # PAR
            sync = t.sync
            lifted = b.eq_context(("par", sync), [el, er])
            if isinstance(nr, BotNF):
                e = b.axiom("PA2", x=reify(nl), A=sync)
                result = (BOT_NF, b.eq_trans(lifted, e))
            elif isinstance(nl, BotNF):
                e1 = b.axiom("PA1", x=BOT_TERM, y=reify(nr), A=sync)
                e2 = b.axiom("PA2", x=reify(nr), A=sync)
                result = (BOT_NF, b.eq_trans(lifted, e1, e2))
            else:
                nf, e = _nf_parallel(b, nl, nr, sync, memo)
                result = (nf, b.eq_trans(lifted, e))
    memo[t] = result
    return result
