"""Random terms and formulas for property tests."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from mlss.syntax import And, AtomF, Diff, Empty, Eq, Inter, Mem, Neg, Or, Single, Union, Var

NAMES = ("x", "y", "z")


def rand_term(rng: random.Random, names=NAMES, depth: int = 2, annotate: bool = False):
    if depth == 0 or rng.random() < 0.4:
        r = rng.random()
        if r < 0.8:
            return Var(rng.choice(names))
        return Empty(rng.randint(0, 2) if annotate and rng.random() < 0.5 else None)
    k = rng.randrange(4)
    if k == 0:
        return Single(rand_term(rng, names, depth - 1, annotate))
    op = (Union, Inter, Diff)[k - 1]
    return op(rand_term(rng, names, depth - 1, annotate), rand_term(rng, names, depth - 1, annotate))


def rand_atom(rng: random.Random, names=NAMES, depth: int = 1, annotate: bool = False):
    s, t = rand_term(rng, names, depth, annotate), rand_term(rng, names, depth, annotate)
    return AtomF(Mem(s, t) if rng.random() < 0.5 else Eq(s, t))


def rand_literal(rng: random.Random, names=NAMES, depth: int = 1):
    a = rand_atom(rng, names, depth)
    return a if rng.random() < 0.5 else Neg(a)


def rand_formula(rng: random.Random, names=NAMES, connectives: int = 3, depth: int = 1, annotate: bool = False):
    """A formula with exactly ``connectives`` connectives."""
    if connectives == 0:
        return rand_atom(rng, names, depth, annotate)
    if rng.random() < 0.3:
        return Neg(rand_formula(rng, names, connectives - 1, depth, annotate))
    k = rng.randint(0, connectives - 1)
    op = And if rng.random() < 0.6 else Or
    return op(rand_formula(rng, names, k, depth, annotate), rand_formula(rng, names, connectives - 1 - k, depth, annotate))


# -- hypothesis strategies ---------------------------------------------------

names_st = st.sampled_from(("x", "y", "z", "a1", "set_b"))

terms_st = st.recursive(
    st.one_of(
        names_st.map(Var),
        st.just(Empty()),
        st.integers(0, 3).map(Empty),
    ),
    lambda sub: st.one_of(
        sub.map(Single),
        st.tuples(sub, sub).map(lambda p: Union(*p)),
        st.tuples(sub, sub).map(lambda p: Inter(*p)),
        st.tuples(sub, sub).map(lambda p: Diff(*p)),
    ),
    max_leaves=6,
)

atoms_st = st.tuples(terms_st, terms_st, st.booleans()).map(
    lambda p: AtomF(Mem(p[0], p[1]) if p[2] else Eq(p[0], p[1]))
)

formulas_st = st.recursive(
    atoms_st,
    lambda sub: st.one_of(
        sub.map(Neg),
        st.tuples(sub, sub).map(lambda p: And(*p)),
        st.tuples(sub, sub).map(lambda p: Or(*p)),
    ),
    max_leaves=5,
)


def small_terms_st(names=("x", "y")):
    return st.recursive(
        st.one_of(st.sampled_from(names).map(Var), st.just(Empty())),
        lambda sub: st.one_of(
            sub.map(Single),
            st.tuples(sub, sub).map(lambda p: Union(*p)),
            st.tuples(sub, sub).map(lambda p: Inter(*p)),
            st.tuples(sub, sub).map(lambda p: Diff(*p)),
        ),
        max_leaves=3,
    )


def small_formulas_st(names=("x", "y")):
    terms = small_terms_st(names)
    atoms = st.tuples(terms, terms, st.booleans()).map(
        lambda p: AtomF(Mem(p[0], p[1]) if p[2] else Eq(p[0], p[1]))
    )
    return st.recursive(
        atoms,
        lambda sub: st.one_of(
            sub.map(Neg),
            st.tuples(sub, sub).map(lambda p: And(*p)),
            st.tuples(sub, sub).map(lambda p: Or(*p)),
        ),
        max_leaves=3,
    )
