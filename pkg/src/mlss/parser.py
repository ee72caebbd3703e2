"""Concrete ASCII syntax for MLSS formulas.

Terms, tightest binding first::

    x   {}   {}@n   {t1, ..., tk}   (t)      primaries
    t ^ t                                     intersection
    t \\ t                                     difference
    t + t                                     union

Atoms are ``t = t``, ``t != t``, ``t in t``, ``t notin t`` and ``t <= t``
(subset, read as ``t + t' = t'``).  Formulas combine atoms with ``~``,
``&`` and ``|`` (tightest first) and parentheses.  Binary operators are
left-associative.  ``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .syntax import (
    And, AtomF, Diff, Empty, Eq, Formula, Inter, Mem, Neg, Or, Single, Term, Union, Var,
)

KEYWORDS = {"in", "notin"}


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


class ParseError(ValueError):
    def __init__(self, message: str, span: Span, expected=(), origin: str = "<string>"):
        self.message = message
        self.span = span
        self.expected = tuple(sorted(set(expected)))
        self.origin = origin
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{origin}:{span}: {message}{detail}")


@dataclass
class SourceFormula:
    """A parsed input together with where its atoms came from."""

    text: str
    origin: str
    formula: Formula
    atom_spans: list[Span] = field(default_factory=list)


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<num>[0-9]+)
  | (?P<sym>!=|<=|[{}(),@^\\+=~&|])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'ident', 'num', 'kw', 'sym', 'eof'
    text: str
    span: Span


def _tokenize(text: str, origin: str, allow_reserved: bool) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            span = Span(pos, pos + 1, line, pos - line_start + 1)
            raise ParseError(f"unexpected character {text[pos]!r}", span, origin=origin)
        kind = m.lastgroup
        s = m.group()
        span = Span(pos, m.end(), line, pos - line_start + 1)
        if kind == "ws":
            for i, ch in enumerate(s):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        elif kind == "ident":
            if s in KEYWORDS:
                toks.append(_Tok("kw", s, span))
            else:
                if s.startswith("_") and not allow_reserved:
                    raise ParseError(f"identifier {s!r} is reserved for solver witnesses", span, origin=origin)
                toks.append(_Tok("ident", s, span))
        else:
            toks.append(_Tok(kind, s, span))
        pos = m.end()
    toks.append(_Tok("eof", "", Span(pos, pos, line, pos - line_start + 1)))
    return toks


class _Fail(Exception):
    pass


class _Parser:
    def __init__(self, text: str, origin: str, allow_reserved: bool):
        self.origin = origin
        self.toks = _tokenize(text, origin, allow_reserved)
        self.pos = 0
        self.atom_spans: list[tuple[int, Span]] = []
        # furthest failure seen, for error reporting after backtracking
        self.err_pos = -1
        self.err_expected: set[str] = set()

    # -- helpers
    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def at(self, text: str) -> bool:
        t = self.toks[self.pos]
        return t.kind in ("sym", "kw") and t.text == text

    def fail(self, *expected: str):
        if self.pos > self.err_pos:
            self.err_pos, self.err_expected = self.pos, set(expected)
        elif self.pos == self.err_pos:
            self.err_expected |= set(expected)
        raise _Fail

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            self.fail(repr(text))
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def error(self) -> ParseError:
        tok = self.toks[max(self.err_pos, 0)]
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"unexpected {found}", tok.span, self.err_expected, self.origin)

    # -- formulas
    def formula(self) -> Formula:
        f = self.conj()
        while self.at("|"):
            self.pos += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.at("&"):
            self.pos += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.at("~"):
            self.pos += 1
            return Neg(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        start, n_spans = self.pos, len(self.atom_spans)
        try:
            return self.atom()
        except _Fail:
            if not self.toks[start].text == "(" or self.toks[start].kind != "sym":
                raise
            self.pos = start
            del self.atom_spans[n_spans:]
        self.expect("(")
        f = self.formula()
        self.expect(")")
        return f

    def atom(self) -> Formula:
        first = self.peek().span
        s = self.term()
        if self.at("="):
            op = "="
        elif self.at("!="):
            op = "!="
        elif self.at("in"):
            op = "in"
        elif self.at("notin"):
            op = "notin"
        elif self.at("<="):
            op = "<="
        else:
            self.fail("'='", "'!='", "'in'", "'notin'", "'<='")
        self.pos += 1
        t = self.term()
        last = self.toks[self.pos - 1].span
        self.atom_spans.append(Span(first.start, last.end, first.line, first.col))
        if op == "=":
            return AtomF(Eq(s, t))
        if op == "!=":
            return Neg(AtomF(Eq(s, t)))
        if op == "in":
            return AtomF(Mem(s, t))
        if op == "notin":
            return Neg(AtomF(Mem(s, t)))
        return AtomF(Eq(Union(s, t), t))

    # -- terms
    def term(self) -> Term:
        t = self.diff()
        while self.at("+"):
            self.pos += 1
            t = Union(t, self.diff())
        return t

    def diff(self) -> Term:
        t = self.inter()
        while self.at("\\"):
            self.pos += 1
            t = Diff(t, self.inter())
        return t

    def inter(self) -> Term:
        t = self.tprimary()
        while self.at("^"):
            self.pos += 1
            t = Inter(t, self.tprimary())
        return t

    def tprimary(self) -> Term:
        tok = self.peek()
        if tok.kind == "ident":
            self.pos += 1
            return Var(tok.text)
        if self.at("("):
            self.pos += 1
            t = self.term()
            self.expect(")")
            return t
        if self.at("{"):
            self.pos += 1
            if self.at("}"):
                self.pos += 1
                if self.at("@"):
                    self.pos += 1
                    num = self.peek()
                    if num.kind != "num":
                        self.fail("level number")
                    self.pos += 1
                    return Empty(int(num.text))
                return Empty()
            elems = [self.term()]
            while self.at(","):
                self.pos += 1
                elems.append(self.term())
            self.expect("}")
            out: Term = Single(elems[-1])
            for e in reversed(elems[:-1]):
                out = Union(Single(e), out)
            return out
        self.fail("identifier", "'{'", "'('")


def parse_source(text: str, origin: str = "<string>", *, allow_reserved: bool = False) -> SourceFormula:
    p = _Parser(text, origin, allow_reserved)
    try:
        f = p.formula()
        if p.peek().kind != "eof":
            p.fail("'&'", "'|'", "end of input")
    except _Fail:
        raise p.error() from None
    spans = [sp for sp in p.atom_spans]
    return SourceFormula(text, origin, f, spans)


def parse(text: str, origin: str = "<string>", *, allow_reserved: bool = False) -> Formula:
    """Parse one formula.  Raises :class:`ParseError`."""
    return parse_source(text, origin, allow_reserved=allow_reserved).formula


def parse_term(text: str, *, allow_reserved: bool = False) -> Term:
    p = _Parser(text, "<string>", allow_reserved)
    try:
        t = p.term()
        if p.peek().kind != "eof":
            p.fail("end of input")
    except _Fail:
        raise p.error() from None
    return t


# -- pretty printing --------------------------------------------------------

_TERM_PREC = {Union: 1, Diff: 2, Inter: 3}
_TERM_OP = {Union: "+", Diff: "\\", Inter: "^"}


def _term_prec(t: Term) -> int:
    return _TERM_PREC.get(type(t), 4)


def pretty_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Empty):
        return "{}" if t.level is None else f"{{}}@{t.level}"
    if isinstance(t, Single):
        return "{" + pretty_term(t.inner) + "}"
    prec = _TERM_PREC[type(t)]
    left = pretty_term(t.left)
    right = pretty_term(t.right)
    if _term_prec(t.left) < prec:
        left = f"({left})"
    if _term_prec(t.right) <= prec:
        right = f"({right})"
    return f"{left} {_TERM_OP[type(t)]} {right}"


def _fm_prec(f: Formula) -> int:
    if isinstance(f, Or):
        return 1
    if isinstance(f, And):
        return 2
    return 3


def pretty(f: Formula) -> str:
    """Render ``f`` with the fewest parentheses that parse back to ``f``."""
    if isinstance(f, AtomF):
        a = f.atom
        op = "in" if isinstance(a, Mem) else "="
        l, r = a.sides
        return f"{pretty_term(l)} {op} {pretty_term(r)}"
    if isinstance(f, Neg):
        if isinstance(f.inner, AtomF):
            a = f.inner.atom
            op = "notin" if isinstance(a, Mem) else "!="
            l, r = a.sides
            return f"{pretty_term(l)} {op} {pretty_term(r)}"
        inner = pretty(f.inner)
        if _fm_prec(f.inner) < 3:
            inner = f"({inner})"
        return f"~{inner}"
    prec = _fm_prec(f)
    op = "|" if isinstance(f, Or) else "&"
    left, right = pretty(f.left), pretty(f.right)
    if _fm_prec(f.left) < prec:
        left = f"({left})"
    if _fm_prec(f.right) <= prec:
        right = f"({right})"
    return f"{left} {op} {right}"
