"""Formula corpora shared by the tests."""

from __future__ import annotations

from itertools import product

from mlss.syntax import And, AtomF, Diff, Empty, Eq, Inter, Mem, Neg, Or, Single, Union, Var

X, Y = Var("x"), Var("y")
E = Empty()

# every term of depth at most one over x and y, up to commutativity of + and ^
TERMS = [X, Y, E, Single(X), Single(Y), Single(E), Union(X, Y), Inter(X, Y), Diff(X, Y), Diff(Y, X)]


def atom_pool():
    """Atoms with a variable on at least one side and a depth-one term on the other."""
    out = []
    for v, t in product((X, Y), TERMS):
        out.append(AtomF(Mem(v, t)))
    for t, v in product(TERMS, (X, Y)):
        if t not in (X, Y):
            out.append(AtomF(Mem(t, v)))
    seen = set()
    for v, t in product((X, Y), TERMS):
        if v != t and frozenset((v, t)) not in seen:
            seen.add(frozenset((v, t)))
            out.append(AtomF(Eq(v, t)))
    return out


def small_formulas(pool=None):
    """All formulas with at most two connectives and at most two atom occurrences."""
    pool = atom_pool() if pool is None else pool
    for a in pool:
        yield a
        yield Neg(a)
        yield Neg(Neg(a))
    for a, b in product(pool, repeat=2):
        for op in (And, Or):
            yield op(a, b)
            yield Neg(op(a, b))
            yield op(Neg(a), b)
            yield op(a, Neg(b))
