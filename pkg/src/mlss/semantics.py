"""Interpretation of MLSS over hereditarily finite sets.

A valuation is any mapping from variable names to :class:`HFSet`; names it
does not mention denote the empty set.
"""

from __future__ import annotations

from itertools import product
from typing import Mapping

from .hf import EMPTY, HFSet, hf_diff, hf_inter, hf_mem, hf_single, hf_union, hf_universe, render
from .syntax import (
    And, Atom, AtomF, Diff, Empty, Eq, Formula, Inter, Mem, Neg, Or, Single, Term, Union, Var,
    vars_of,
)

Valuation = Mapping[str, HFSet]

ORACLE_MAX_VARS = 4
ORACLE_MAX_RANK = 3


def interp_term(M: Valuation, t: Term) -> HFSet:
    if isinstance(t, Var):
        return M.get(t.name, EMPTY)
    if isinstance(t, Empty):
        return EMPTY
    if isinstance(t, Single):
        return hf_single(interp_term(M, t.inner))
    if isinstance(t, Union):
        return hf_union(interp_term(M, t.left), interp_term(M, t.right))
    if isinstance(t, Inter):
        return hf_inter(interp_term(M, t.left), interp_term(M, t.right))
    if isinstance(t, Diff):
        return hf_diff(interp_term(M, t.left), interp_term(M, t.right))
    raise TypeError(f"not a set term: {t!r}")


def interp_atom(M: Valuation, a: Atom) -> bool:
    if isinstance(a, Mem):
        return hf_mem(interp_term(M, a.elem), interp_term(M, a.set))
    if isinstance(a, Eq):
        return interp_term(M, a.left) == interp_term(M, a.right)
    raise TypeError(f"not a set atom: {a!r}")


def satisfies(M: Valuation, f: Formula) -> bool:
    """``M |= f``."""
    if isinstance(f, AtomF):
        return interp_atom(M, f.atom)
    if isinstance(f, Neg):
        return not satisfies(M, f.inner)
    if isinstance(f, And):
        return satisfies(M, f.left) and satisfies(M, f.right)
    if isinstance(f, Or):
        return satisfies(M, f.left) or satisfies(M, f.right)
    raise TypeError(f"not a formula: {f!r}")


def oracle_sat(f: Formula, rank_bound: int) -> dict[str, HFSet] | None:
    """First model of ``f`` with all variables in ``hf_universe(rank_bound)``.

    Assignments are tried with variables in name order and values in
    canonical order.  ``None`` only means there is no model inside the
    bounded universe.
    """
    names = sorted(vars_of(f))
    if len(names) > ORACLE_MAX_VARS or rank_bound > ORACLE_MAX_RANK:
        raise ValueError(
            f"oracle guard: at most {ORACLE_MAX_VARS} variables and rank {ORACLE_MAX_RANK}, "
            f"got {len(names)} variables and rank {rank_bound}"
        )
    universe = hf_universe(rank_bound)
    for values in product(universe, repeat=len(names)):
        M = dict(zip(names, values))
        if satisfies(M, f):
            return M
    return None


def render_model(M: Valuation, names=None) -> str:
    """One ``name = {...}`` line per variable, in name order."""
    names = sorted(M) if names is None else sorted(names)
    return "\n".join(f"{x} = {render(M.get(x, EMPTY))}" for x in names)
