"""Process terms: abstract syntax, concrete grammar, canonical ordering, metrics.

Terms are immutable and hash-consed: building the same term twice yields the
same object, so ``==`` is structural identity and dictionary lookups are O(1).
Always construct terms through the factory functions (:func:`prefix`,
:func:`ext_choice`, ...) or the parser; the class constructor is private.

Concrete syntax (also published in docs/grammar.ebnf)::

    term := disj
    disj := ext  { "\\/" ext }
    ext  := par  { "[]" par }
    par  := conj { "|[" [ident {"," ident}] "]|" conj }
    conj := pre  { "/\\" pre }
    pre  := (ident | "tau") "." pre | atom
    atom := "0" | "bot" | "(" term ")"

All binary operators are left-associative; binding from tightest to loosest:
prefix, ``/\\``, ``|[..]|``, ``[]``, ``\\/``.  ``tau`` and ``bot`` are
reserved words and cannot be used as visible action names.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator

TAU = "tau"

# Constructor kinds, in canonical order (used by canonical_compare).
NIL, BOT, PREFIX, EXT, CONJ, DISJ, PAR = (
    "nil", "bot", "prefix", "ext", "conj", "disj", "par",
)
_KIND_RANK = {NIL: 0, BOT: 1, PREFIX: 2, EXT: 3, CONJ: 4, DISJ: 5, PAR: 6}

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RESERVED = frozenset({"tau", "bot"})


def is_action_name(name: str) -> bool:
    """True iff ``name`` is a legal visible action name."""
    return bool(_NAME_RE.match(name)) and name not in _RESERVED


def check_action(action: str, *, allow_tau: bool = True) -> str:
    if action == TAU:
        if not allow_tau:
            raise ValueError("tau is not allowed here")
        return action
    if not isinstance(action, str) or not is_action_name(action):
        raise ValueError(f"invalid action name: {action!r}")
    return action


def action_key(action: str) -> tuple:
    """Sort key over actions: tau first, then visible names lexicographically."""
    return (0, "") if action == TAU else (1, action)


def sync_set(names: Iterable[str]) -> frozenset[str]:
    """A synchronization set: a finite set of visible action names."""
    out = frozenset(names)
    for name in out:
        check_action(name, allow_tau=False)
    return out


class Term:
    """A closed CLL process term (one of 0, bot, a.t, t[]t, t/\\t, t\\/t, t|[A]|t)."""

    __slots__ = ("kind", "action", "left", "right", "sync", "degree", "is_basic", "_key")

    _pool: dict[tuple, "Term"] = {}

    def __init__(self, _token=None, **fields):
        if _token is not _INTERN_TOKEN:
            raise TypeError("use the factory functions (nil, bot, prefix, ...) to build terms")
        for name, value in fields.items():
            object.__setattr__(self, name, value)

    def __setattr__(self, name, value):
        raise AttributeError("terms are immutable")

    @property
    def body(self) -> "Term":
        """Continuation of a prefix term."""
        if self.kind != PREFIX:
            raise ValueError("body is only defined for prefix terms")
        return self.left

    def key(self) -> tuple:
        """Structural sort key; distinct terms always have distinct keys."""
        cached = self._key
        if cached is None:
            rank = _KIND_RANK[self.kind]
            if self.kind in (NIL, BOT):
                cached = (rank,)
            elif self.kind == PREFIX:
                cached = (rank, action_key(self.action), self.left.key())
            elif self.kind == PAR:
                cached = (rank, self.left.key(), self.right.key(), tuple(sorted(self.sync)))
            else:
                cached = (rank, self.left.key(), self.right.key())
            object.__setattr__(self, "_key", cached)
        return cached

    def subterms(self) -> Iterator["Term"]:
        """This term and all of its subterms, pre-order."""
        yield self
        if self.left is not None:
            yield from self.left.subterms()
        if self.right is not None:
            yield from self.right.subterms()

    def __repr__(self) -> str:
        return pretty_print(self)


_INTERN_TOKEN = object()


def _intern(kind, action, left, right, sync) -> Term:
    pool_key = (kind, action, id(left), id(right), sync)
    term = Term._pool.get(pool_key)
    if term is None:
        if kind in (NIL, BOT):
            degree = 1
            basic = kind == NIL
        elif kind == PREFIX:
            degree = left.degree + 1
            basic = left.is_basic
        else:
            degree = left.degree + right.degree + 1
            basic = left.is_basic and right.is_basic and kind != CONJ
        term = Term(
            _INTERN_TOKEN,
            kind=kind, action=action, left=left, right=right, sync=sync,
            degree=degree, is_basic=basic, _key=None,
        )
        Term._pool[pool_key] = term
    return term


def nil() -> Term:
    """The empty process 0 (consistent, no behavior)."""
    return _intern(NIL, None, None, None, None)


def bot() -> Term:
    """The inconsistent process bot (no behavior, unimplementable)."""
    return _intern(BOT, None, None, None, None)


def prefix(action: str, body: Term) -> Term:
    """action.body, where action is a visible name or tau."""
    check_action(action)
    return _intern(PREFIX, action, body, None, None)


def ext_choice(left: Term, right: Term) -> Term:
    """External choice: left [] right."""
    return _intern(EXT, None, left, right, None)


def conj(left: Term, right: Term) -> Term:
    """Conjunction: left /\\ right."""
    return _intern(CONJ, None, left, right, None)


def disj(left: Term, right: Term) -> Term:
    """Disjunction (internal choice): left \\/ right."""
    return _intern(DISJ, None, left, right, None)


def par(left: Term, right: Term, sync: Iterable[str]) -> Term:
    """CSP-style parallel composition synchronizing on ``sync``."""
    return _intern(PAR, None, left, right, sync_set(sync))


NIL_TERM = nil()
BOT_TERM = bot()


def degree(t: Term) -> int:
    """Size measure: |0| = |bot| = 1, |a.t| = |t|+1, |t (.) s| = |t|+|s|+1."""
    return t.degree


def is_basic(t: Term) -> bool:
    """True iff t contains neither bot nor a conjunction."""
    return t.is_basic


def canonical_compare(t: Term, s: Term) -> int:
    """Total order on terms; returns -1, 0 or 1.  0 means syntactic identity."""
    if t is s:
        return 0
    a, b = t.key(), s.key()
    return -1 if a < b else 1


def gen_choice(items: Iterable[Term]) -> Term:
    """General external choice over a sequence, left-nested; empty sequence is 0."""
    items = list(items)
    if not items:
        return NIL_TERM
    acc = items[0]
    for item in items[1:]:
        acc = ext_choice(acc, item)
    return acc


def gen_disj(items: Iterable[Term]) -> Term:
    """General disjunction over a nonempty sequence, left-nested."""
    items = list(items)
    if not items:
        raise ValueError("general disjunction needs at least one disjunct")
    acc = items[0]
    for item in items[1:]:
        acc = disj(acc, item)
    return acc


# --- pretty printer ---------------------------------------------------------

# Binding levels, loosest to tightest.  A child is parenthesized when its
# level is below the level its position requires; right operands of a binary
# operator require one level more, which makes chains print left-associated.
_LEVEL = {DISJ: 0, EXT: 1, PAR: 2, CONJ: 3, PREFIX: 4, NIL: 5, BOT: 5}


def _render(t: Term, min_level: int) -> str:
    level = _LEVEL[t.kind]
    if level < min_level:
        return "(" + _render(t, 0) + ")"
    if t.kind == NIL:
        return "0"
    if t.kind == BOT:
        return "bot"
    if t.kind == PREFIX:
        return f"{t.action}.{_render(t.left, 4)}"
    if t.kind == CONJ:
        return f"{_render(t.left, 3)} /\\ {_render(t.right, 4)}"
    if t.kind == PAR:
        inner = ",".join(sorted(t.sync))
        return f"{_render(t.left, 2)} |[{inner}]| {_render(t.right, 3)}"
    if t.kind == EXT:
        return f"{_render(t.left, 1)} [] {_render(t.right, 2)}"
    return f"{_render(t.left, 0)} \\/ {_render(t.right, 1)}"


def pretty_print(t: Term) -> str:
    """Render with minimal parentheses; parse(pretty_print(t)) is t again."""
    return _render(t, 0)


# --- parser -----------------------------------------------------------------

class ParseError(ValueError):
    """Syntax error with position and the set of tokens that were expected."""

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...]):
        super().__init__(f"{message} at line {line}, column {column}"
                         + (f" (expected {', '.join(expected)})" if expected else ""))
        self.line = line
        self.column = column
        self.expected = expected


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<popen>\|\[)
  | (?P<pclose>\]\|)
  | (?P<ext>\[\])
  | (?P<conj>/\\)
  | (?P<disj>\\/)
  | (?P<zero>0)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<dot>\.)
  | (?P<comma>,)
  | (?P<lpar>\()
  | (?P<rpar>\))
    """,
    re.VERBOSE,
)

_TOKEN_NAMES = {
    "popen": "'|['", "pclose": "']|'", "ext": "'[]'", "conj": "'/\\'",
    "disj": "'\\/'", "zero": "'0'", "dot": "'.'", "comma": "','",
    "lpar": "'('", "rpar": "')'", "ident": "identifier",
    "bot": "'bot'", "tau": "'tau'", "eof": "end of input",
}


class _Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind, text, line, column):
        self.kind = kind
        self.text = text
        self.line = line
        self.column = column


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col, ())
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            if kind == "ident" and value in _RESERVED:
                kind = value  # "tau" / "bot" keyword tokens
            tokens.append(_Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(tok, (kind,))
        return self.advance()

    def fail(self, tok: _Token, expected: tuple[str, ...]):
        shown = tuple(_TOKEN_NAMES.get(k, k) for k in expected)
        what = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"unexpected {what}", tok.line, tok.column, shown)

    def parse_term(self) -> Term:
        t = self.parse_disj()
        tok = self.peek()
        if tok.kind != "eof":
            self.fail(tok, ("eof",))
        return t

    def parse_disj(self) -> Term:
        t = self.parse_ext()
        while self.peek().kind == "disj":
            self.advance()
            t = disj(t, self.parse_ext())
        return t

    def parse_ext(self) -> Term:
        t = self.parse_par()
        while self.peek().kind == "ext":
            self.advance()
            t = ext_choice(t, self.parse_par())
        return t

    def parse_par(self) -> Term:
        t = self.parse_conj()
        while self.peek().kind == "popen":
            self.advance()
            names = []
            if self.peek().kind == "ident":
                names.append(self.advance().text)
                while self.peek().kind == "comma":
                    self.advance()
                    names.append(self.expect("ident").text)
            self.expect("pclose")
            t = par(t, self.parse_conj(), names)
        return t

    def parse_conj(self) -> Term:
        t = self.parse_pre()
        while self.peek().kind == "conj":
            self.advance()
            t = conj(t, self.parse_pre())
        return t

    def parse_pre(self) -> Term:
        tok = self.peek()
        if tok.kind in ("ident", "tau"):
            self.advance()
            self.expect("dot")
            return prefix(TAU if tok.kind == "tau" else tok.text, self.parse_pre())
        return self.parse_atom()

    def parse_atom(self) -> Term:
        tok = self.peek()
        if tok.kind == "zero":
            self.advance()
            return NIL_TERM
        if tok.kind == "bot":
            self.advance()
            return BOT_TERM
        if tok.kind == "lpar":
            self.advance()
            t = self.parse_disj()
            self.expect("rpar")
            return t
        self.fail(tok, ("zero", "bot", "lpar", "ident", "tau"))


def parse(text: str) -> Term:
    """Parse the concrete syntax into a term; raises ParseError on bad input."""
    return _Parser(text).parse_term()
