from mlss.parser import parse
from mlss.syntax import And, Empty, Neg, Var, eq, mem, neq, notmem, subterms
from mlss.tableau import (
    ALL_RULES, BRANCHING_RULES, LINEAR_RULES, Branch, branch_bound, branching_expansions,
    closed_by_new, is_closed, is_lin_sat, is_sat, linear_expansions, pwits, subterms_prime, wits,
)

x, y, z = Var("x"), Var("y"), Var("z")
p, q = mem(x, y), mem(y, z)


def test_rule_catalogue():
    assert len(LINEAR_RULES) == 31 and len(BRANCHING_RULES) == 6
    assert len(set(ALL_RULES)) == len(ALL_RULES)


def test_initial_formula_stays_first():
    b = Branch.initial(And(p, q))
    b2 = b.extend([p, q])
    assert b2.phi == And(p, q) and b2.formulas == (And(p, q), p, q)
    assert b2.extend([p]) is b2


def test_closedness_examples():
    assert is_closed(Branch([mem(x, Empty(0))])).kind == "mem-empty"
    assert is_closed(Branch([neq(x, x)])).kind == "neq-refl"
    r = is_closed(Branch([And(mem(x, y), mem(y, x)), mem(x, y), mem(y, x)]))
    assert r.kind == "member-cycle" and set(r.formulas) == {mem(x, y), mem(y, x)}
    r = is_closed(Branch([And(p, Neg(p)), p, Neg(p)]))
    assert r.kind == "contradiction" and r.formulas == (p, Neg(p))
    assert is_closed(Branch([p])) is None


def test_self_loop_is_a_cycle():
    assert is_closed(Branch([mem(x, x)])).kind == "member-cycle"


def test_closedness_order():
    b = Branch([And(mem(x, Empty()), neq(x, x)), mem(x, Empty()), neq(x, x)])
    assert is_closed(b).kind == "mem-empty"


def test_incremental_cycle_matches_full():
    phi = parse("x in y & y in z & z in x")
    b = Branch([phi, mem(x, y), mem(y, z)])
    b2 = b.extend([mem(z, x)])
    r = closed_by_new(b2, [mem(z, x)])
    assert r.kind == "member-cycle" and len(r.formulas) == 3
    assert is_closed(b2).kind == "member-cycle"


def test_linear_examples():
    steps = linear_expansions(Branch([And(p, q)]))
    assert steps[0].rule == "prop.and" and steps[0].conclusions == (p, q)
    steps = linear_expansions(Branch([Neg(Neg(p))]))
    assert steps[0].rule == "prop.neg-neg" and steps[0].conclusions == (p,)


def test_union_intro_needs_subterm():
    phi = parse("x + z = x + z")
    b = Branch([phi, mem(y, x)])
    rules = [s.rule for s in linear_expansions(b)]
    assert "union.mem-intro-l" in rules
    b = Branch([parse("x = z"), mem(y, x)])
    assert "union.mem-intro-l" not in [s.rule for s in linear_expansions(b)]


def test_lin_sat():
    assert is_lin_sat(Branch([p]))
    assert not is_lin_sat(Branch([And(p, q)]))


def test_disjunction_cut():
    b = Branch([parse("x in y | y in z")])
    (s,) = branching_expansions(b)
    assert s.rule == "branch.or" and s.alternatives == ((p,), (Neg(p),))


def test_witness_subsumption():
    phi = neq(x, y)
    b = Branch([phi])
    (s,) = branching_expansions(b)
    assert s.rule == "branch.witness" and s.fresh_witness == "_w0"
    b2 = b.extend([mem(z, x), notmem(z, y)])
    assert branching_expansions(b2) == []


def test_witness_skipped_for_urelements():
    b = Branch([neq(x, y)])
    assert branching_expansions(b, urelems=frozenset({x})) == []


def test_witnesses_and_pure_witnesses():
    b = Branch([neq(x, y)])
    assert wits(b) == frozenset()
    w = Var("_w0")
    b2 = b.extend([mem(w, x), notmem(w, y)])
    assert wits(b2) == {"_w0"} and pwits(b2) == {"_w0"}
    assert subterms_prime(b2) == subterms(b.phi)
    b3 = b2.extend([eq(w, x)])
    assert pwits(b3) == frozenset() and w in subterms_prime(b3)


def test_double_negation_counterexample():
    phi = And(Neg(Neg(Neg(p))), p)
    b = Branch([phi, Neg(Neg(Neg(p))), p])
    off = frozenset({"prop.neg-neg"})
    assert is_closed(b) is None and is_sat(b, disabled=off)
    assert not is_lin_sat(b)


def test_bound_value():
    assert branch_bound(parse("x != x")) == 2 * 2 + 16 * 1


def test_progress_invariant():
    b = Branch([parse("x in y + z & x notin y & (x = z | z in x)")])
    for s in linear_expansions(b):
        assert any(c not in b for c in s.conclusions)
