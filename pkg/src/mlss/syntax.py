"""Abstract syntax of MLSS: set terms, set atoms and propositional formulas.

All nodes are immutable and hashable.  Structural equality is the only
notion of equality on syntax; ``sort_key`` gives a canonical total order
so that iteration over sets of terms is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union as _U


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Empty(Term):
    """The empty set.  ``level`` only matters to the level type system."""

    level: int | None = None


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Single(Term):
    inner: Term


@dataclass(frozen=True)
class Union(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Inter(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Diff(Term):
    left: Term
    right: Term


BINARY_OPS = (Union, Inter, Diff)


class Atom:
    __slots__ = ()


@dataclass(frozen=True)
class Mem(Atom):
    elem: Term
    set: Term

    @property
    def sides(self) -> tuple[Term, Term]:
        return (self.elem, self.set)


@dataclass(frozen=True)
class Eq(Atom):
    left: Term
    right: Term

    @property
    def sides(self) -> tuple[Term, Term]:
        return (self.left, self.right)


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class AtomF(Formula):
    atom: Atom


@dataclass(frozen=True)
class Neg(Formula):
    inner: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Literal:
    """A signed atom; ``positive=False`` stands for ``Neg(AtomF(atom))``."""

    positive: bool
    atom: Atom

    def to_formula(self) -> Formula:
        f = AtomF(self.atom)
        return f if self.positive else Neg(f)

    @staticmethod
    def of(f: Formula) -> Literal | None:
        if isinstance(f, AtomF):
            return Literal(True, f.atom)
        if isinstance(f, Neg) and isinstance(f.inner, AtomF):
            return Literal(False, f.inner.atom)
        return None


Syntax = _U[Term, Atom, Formula, Literal]


# -- shorthand constructors -------------------------------------------------

def mem(s: Term, t: Term) -> Formula:
    return AtomF(Mem(s, t))


def notmem(s: Term, t: Term) -> Formula:
    return Neg(AtomF(Mem(s, t)))


def eq(s: Term, t: Term) -> Formula:
    return AtomF(Eq(s, t))


def neq(s: Term, t: Term) -> Formula:
    return Neg(AtomF(Eq(s, t)))


def conj(*fs: Formula) -> Formula:
    """Left-nested conjunction of one or more formulas."""
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


# -- canonical order --------------------------------------------------------

_TERM_RANK = {Empty: 0, Var: 1, Single: 2, Union: 3, Inter: 4, Diff: 5}
_FM_RANK = {AtomF: 0, Neg: 1, And: 2, Or: 3}


def sort_key(x) -> tuple:
    """Canonical total order key: constructor rank, then children."""
    if isinstance(x, Var):
        return (1, x.name)
    if isinstance(x, Empty):
        return (0, -1 if x.level is None else x.level)
    if isinstance(x, Single):
        return (2, sort_key(x.inner))
    if isinstance(x, BINARY_OPS):
        return (_TERM_RANK[type(x)], sort_key(x.left), sort_key(x.right))
    if isinstance(x, Mem):
        return (0, sort_key(x.elem), sort_key(x.set))
    if isinstance(x, Eq):
        return (1, sort_key(x.left), sort_key(x.right))
    if isinstance(x, AtomF):
        return (0, sort_key(x.atom))
    if isinstance(x, Neg):
        return (1, sort_key(x.inner))
    if isinstance(x, (And, Or)):
        return (_FM_RANK[type(x)], sort_key(x.left), sort_key(x.right))
    if isinstance(x, Literal):
        return (0 if x.positive else 1, sort_key(x.atom))
    raise TypeError(f"not MLSS syntax: {x!r}")


def sorted_canonical(xs: Iterable) -> list:
    return sorted(xs, key=sort_key)


# -- traversals -------------------------------------------------------------

def iter_atoms(f: Formula) -> Iterator[Atom]:
    """Atoms of ``f`` left to right, with repetitions."""
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, AtomF):
            yield g.atom
        elif isinstance(g, Neg):
            stack.append(g.inner)
        else:
            stack.append(g.right)
            stack.append(g.left)


def atoms(f: Formula) -> set[Atom]:
    return set(iter_atoms(f))


def _term_subterms(t: Term, acc: set[Term]) -> None:
    if t in acc:
        return
    acc.add(t)
    if isinstance(t, Single):
        _term_subterms(t.inner, acc)
    elif isinstance(t, BINARY_OPS):
        _term_subterms(t.left, acc)
        _term_subterms(t.right, acc)


def subterms(x) -> set[Term]:
    """All set terms occurring in a term, atom, literal, formula or sequence of formulas."""
    acc: set[Term] = set()
    if isinstance(x, Term):
        _term_subterms(x, acc)
    elif isinstance(x, Atom):
        for side in x.sides:
            _term_subterms(side, acc)
    elif isinstance(x, Literal):
        for side in x.atom.sides:
            _term_subterms(side, acc)
    elif isinstance(x, Formula):
        for a in iter_atoms(x):
            for side in a.sides:
                _term_subterms(side, acc)
    else:
        for f in x:
            acc |= subterms(f)
    return acc


def vars_of(x) -> set[str]:
    """Variable names occurring in a term, atom, literal, formula or sequence of formulas."""
    return {t.name for t in subterms(x) if isinstance(t, Var)}


def subfms(f: Formula) -> set[Formula]:
    acc: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in acc:
            continue
        acc.add(g)
        if isinstance(g, Neg):
            stack.append(g.inner)
        elif isinstance(g, (And, Or)):
            stack.append(g.left)
            stack.append(g.right)
    return acc


def subst_top_level(lit: Literal, old: Term, new: Term) -> Literal:
    """Replace each side of ``lit``'s atom that equals ``old`` by ``new``.

    Occurrences of ``old`` strictly inside a side are left alone.
    """
    a = lit.atom
    l, r = a.sides
    l2 = new if l == old else l
    r2 = new if r == old else r
    if l2 is l and r2 is r:
        return lit
    return Literal(lit.positive, type(a)(l2, r2))


def map_terms(f: Formula, fn) -> Formula:
    """Rebuild ``f`` with every top-level term ``t`` of its atoms replaced by ``fn(t)``."""
    if isinstance(f, AtomF):
        a = f.atom
        return AtomF(type(a)(*(fn(s) for s in a.sides)))
    if isinstance(f, Neg):
        return Neg(map_terms(f.inner, fn))
    return type(f)(map_terms(f.left, fn), map_terms(f.right, fn))


def erase_levels(x):
    """Drop the level tags of every ``Empty`` in a term or formula."""
    if isinstance(x, Formula):
        return map_terms(x, erase_levels)
    if isinstance(x, Empty):
        return Empty()
    if isinstance(x, Single):
        return Single(erase_levels(x.inner))
    if isinstance(x, BINARY_OPS):
        return type(x)(erase_levels(x.left), erase_levels(x.right))
    return x


def size(f: Formula) -> int:
    """Number of formula nodes; used by random generators and tests."""
    if isinstance(f, AtomF):
        return 1
    if isinstance(f, Neg):
        return 1 + size(f.inner)
    return 1 + size(f.left) + size(f.right)
