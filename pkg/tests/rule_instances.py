"""Random instances of each tableau rule, for the rule soundness suite."""

from __future__ import annotations

import random
from itertools import product

from mlss.hf import hf_universe
from mlss.syntax import (
    And, AtomF, Diff, Empty, Eq, Inter, Mem, Neg, Or, Single, Union, Var, eq, mem, neq, notmem,
)
from mlss.tableau import Branch, branching_expansions, linear_expansions

NAMES = ("a", "b", "c")
VALUATIONS = [dict(zip(NAMES, vs)) for vs in product(hf_universe(2), repeat=len(NAMES))]


def term(rng, depth=1):
    if depth == 0 or rng.random() < 0.5:
        return Var(rng.choice(NAMES)) if rng.random() < 0.85 else Empty()
    k = rng.randrange(4)
    if k == 0:
        return Single(term(rng, depth - 1))
    return (Union, Inter, Diff)[k - 1](term(rng, depth - 1), term(rng, depth - 1))


def literal(rng):
    s, t = term(rng), term(rng)
    a = AtomF(Mem(s, t) if rng.random() < 0.5 else Eq(s, t))
    return a if rng.random() < 0.5 else Neg(a)


def formula(rng, depth=1):
    if depth == 0 or rng.random() < 0.5:
        return literal(rng)
    k = rng.randrange(3)
    if k == 0:
        return Neg(formula(rng, depth - 1))
    return (And, Or)[k - 1](formula(rng, depth - 1), formula(rng, depth - 1))


def _holder(*ts):
    """An initial formula whose subterms include ``ts``."""
    out = AtomF(Eq(ts[0], ts[0]))
    for t in ts[1:]:
        out = And(out, AtomF(Eq(t, t)))
    return out


def template(rule: str, rng: random.Random):
    """``(initial formula, premises)`` for one instance of ``rule``."""
    s, t1, t2 = term(rng), term(rng), term(rng)
    A, B = formula(rng), formula(rng)
    U, I, D = Union(t1, t2), Inter(t1, t2), Diff(t1, t2)
    lin = {
        "prop.and": (None, [And(A, B)]),
        "prop.neg-or": (None, [Neg(Or(A, B))]),
        "prop.or-l": (None, [Or(A, B), Neg(A)]),
        "prop.or-r": (None, [Or(A, B), Neg(B)]),
        "prop.neg-and-l": (None, [Neg(And(A, B)), A]),
        "prop.neg-and-r": (None, [Neg(And(A, B)), B]),
        "prop.neg-neg": (None, [Neg(Neg(A))]),
        "single.intro": (_holder(Single(s)), []),
        "single.mem": (None, [mem(s, Single(t1))]),
        "single.notmem": (None, [notmem(s, Single(t1))]),
        "union.notmem": (None, [notmem(s, U)]),
        "union.mem-intro-l": (_holder(U), [mem(s, t1)]),
        "union.mem-intro-r": (_holder(U), [mem(s, t2)]),
        "union.mem-elim-l": (None, [mem(s, U), notmem(s, t1)]),
        "union.mem-elim-r": (None, [mem(s, U), notmem(s, t2)]),
        "union.notmem-intro": (_holder(U), [notmem(s, t1), notmem(s, t2)]),
        "inter.mem": (None, [mem(s, I)]),
        "inter.mem-intro": (_holder(I), [mem(s, t1), mem(s, t2)]),
        "inter.notmem-intro-l": (_holder(I), [notmem(s, t1)]),
        "inter.notmem-intro-r": (_holder(I), [notmem(s, t2)]),
        "inter.notmem-elim-l": (None, [notmem(s, I), mem(s, t1)]),
        "inter.notmem-elim-r": (None, [notmem(s, I), mem(s, t2)]),
        "diff.mem": (None, [mem(s, D)]),
        "diff.mem-intro": (_holder(D), [mem(s, t1), notmem(s, t2)]),
        "diff.notmem-intro-l": (_holder(D), [notmem(s, t1)]),
        "diff.notmem-intro-r": (_holder(D), [mem(s, t2)]),
        "diff.notmem-elim-l": (None, [notmem(s, D), mem(s, t1)]),
        "diff.notmem-elim-r": (None, [notmem(s, D), notmem(s, t2)]),
        "eq.neq": (None, [mem(s, t1), notmem(t2, t1)]),
        "branch.or": (None, [Or(A, B)]),
        "branch.neg-and": (None, [Neg(And(A, B))]),
        "branch.union": (_holder(U), [mem(s, U)]),
        "branch.inter": (_holder(I) if rng.random() < 0.5 else _holder(Inter(t2, t1)), [mem(s, t1)]),
        "branch.diff": (_holder(D), [mem(s, t1)]),
        "branch.witness": (neq(t1, t2), []),
    }
    if rule in ("eq.subst-lr", "eq.subst-rl"):
        target = t1 if rule == "eq.subst-lr" else t2
        other = term(rng)
        sides = (target, other) if rng.random() < 0.5 else (other, target)
        a = AtomF(Mem(*sides) if rng.random() < 0.5 else Eq(*sides))
        return None, [eq(t1, t2), a if rng.random() < 0.5 else Neg(a)]
    return lin[rule]


def instances(rule: str, n: int, seed: int = 0):
    """``n`` rule steps of kind ``rule`` found by the real expansion code."""
    rng = random.Random(f"{rule}/{seed}")
    out, attempts = [], 0
    while len(out) < n:
        attempts += 1
        if attempts > 50 * n:
            raise RuntimeError(f"could not generate instances of {rule}")
        phi, prem = template(rule, rng)
        fs = ([phi] if phi is not None else []) + prem
        if not fs:
            continue
        b = Branch(fs)
        steps = branching_expansions(b) if rule.startswith("branch.") else linear_expansions(b)
        for st in steps:
            if st.rule == rule:
                out.append(st)
                break
    return out
