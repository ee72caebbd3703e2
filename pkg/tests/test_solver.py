import random

import pytest
from hypothesis import given, settings

from gen import rand_formula, small_formulas_st
from mlss.hf import EMPTY, hf_card, hf_single
from mlss.levels import Untypeable
from mlss.parser import parse
from mlss.semantics import oracle_sat, satisfies
from mlss.solver import (
    BudgetExceeded, Closed, Context, OpenSaturated, Sat, Unsat, build_bgraph, decide,
    decide_branch, extract_model, realise, saturate_open,
)
from mlss.syntax import And, Neg, Var, mem
from mlss.tableau import Branch, is_sat

x, y = Var("x"), Var("y")


def test_decide_branch_examples():
    r = decide_branch(Branch([parse("x != x")]), Context())
    assert isinstance(r, Closed) and r.node.kind == "neq-refl"
    r = decide_branch(Branch([parse("x in y & y in x")]), Context())
    assert isinstance(r, Closed)
    assert r.node.rule == "prop.and" and r.node.children[0].kind == "member-cycle"
    r = decide_branch(Branch([parse("x != y & y != z")]), Context())
    assert isinstance(r, OpenSaturated) and r.branch.wits


@pytest.mark.parametrize("mode", ["untyped", "typed"])
def test_decide_examples(mode):
    assert isinstance(decide(parse("x in {}"), mode), Unsat)
    assert isinstance(decide(parse("x in {x}"), mode), Sat)


def test_neg_neg_certificate():
    p = mem(x, y)
    r = decide(And(Neg(Neg(Neg(p))), p), "untyped")
    assert isinstance(r, Unsat)
    node, rules = r.certificate.root, []
    while hasattr(node, "rule"):
        rules.append(node.rule)
        node = node.children[0]
    assert "prop.neg-neg" in rules


def test_realise_single_membership():
    b = Branch([parse("x in y")])
    assert realise(b, x) == EMPTY and realise(b, y) == hf_single(EMPTY)
    assert realise(b, Var("nowhere")) == EMPTY
    assert extract_model(b) == {"x": EMPTY, "y": hf_single(EMPTY)}


def test_pure_witnesses_get_distinct_large_values():
    r = saturate_open(parse("x != y & y != z"))
    b = r.branch
    g = build_bgraph(b)
    ws = sorted(b.wits)
    assert len(ws) >= 2
    vals = [realise(b, Var(w)) for w in ws]
    assert len(set(vals)) == len(vals)
    for v in vals:
        (inner,) = v
        assert hf_card(inner) > len(g.verts)


def test_worked_case_distinct_realisations():
    for mode in ("untyped", "typed"):
        M = decide(parse("x != y & y != z"), mode).model
        assert len({M["x"], M["y"], M["z"]}) == 3


def test_ill_typed_raises_in_typed_mode():
    with pytest.raises(Untypeable):
        decide(parse("x in y & y in x"))
    assert isinstance(decide(parse("x in y & y in x"), "untyped"), Unsat)


def test_disabled_neg_neg_reaches_open_saturated_branch():
    p = mem(x, y)
    r = saturate_open(And(Neg(Neg(Neg(p))), p), disabled=frozenset({"prop.neg-neg"}))
    assert isinstance(r, OpenSaturated)
    assert is_sat(r.branch, disabled=frozenset({"prop.neg-neg"}))


def test_budget():
    with pytest.raises(BudgetExceeded):
        decide(parse("x != y & y != z & x + y = z"), "untyped", budget=2)


def test_bgraph_acyclic_and_arcs():
    b = saturate_open(parse("x in y & y in z & z != x")).branch
    g = build_bgraph(b)
    assert (x, y) in g.arcs and all(s in g.verts and t in g.verts for s, t in g.arcs)


def test_debug_invariants_mode_runs():
    for src in ["x + y = z & z != {} & w in z", "{x} = y & z != x"]:
        decide(parse(src), "typed", debug_invariants=True)
        decide(parse(src), "untyped", debug_invariants=True)


@settings(max_examples=300, deadline=None)
@given(small_formulas_st())
def test_oracle_first_agreement(f):
    M = oracle_sat(f, 3)
    r = decide(f, "untyped")
    if M is not None:
        assert isinstance(r, Sat)
    if isinstance(r, Sat):
        assert satisfies(r.model, f)


def test_three_variable_random_formulas():
    rng = random.Random(11)
    for _ in range(150):
        f = rand_formula(rng, connectives=rng.randint(1, 3), depth=1)
        r = decide(f, "untyped")
        if isinstance(r, Sat):
            assert satisfies(r.model, f)
        else:
            assert oracle_sat(f, 2) is None


def test_typed_and_untyped_agree_on_typeable_input():
    rng = random.Random(5)
    for _ in range(150):
        f = rand_formula(rng, connectives=rng.randint(1, 3), depth=1)
        try:
            t = decide(f, "typed")
        except Untypeable:
            continue
        assert type(t) is type(decide(f, "untyped"))
