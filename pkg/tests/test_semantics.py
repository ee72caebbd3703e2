import pytest
from hypothesis import given, settings

from gen import small_formulas_st
from mlss.hf import EMPTY, hf_single, hf_universe
from mlss.parser import parse
from mlss.semantics import interp_term, oracle_sat, render_model, satisfies
from mlss.syntax import Var

zero, one = EMPTY, hf_single(EMPTY)


def test_interp_defaults_to_empty():
    assert interp_term({}, Var("x")) == EMPTY


def test_satisfies_examples():
    assert satisfies({"x": zero, "y": one}, parse("x in y"))
    assert not satisfies({"x": zero, "y": one}, parse("y in x"))
    assert satisfies({"x": one}, parse("x = {{}}"))
    assert satisfies({"x": one, "y": zero}, parse("x + y = x & x ^ y = {} & x \\ y = x"))


def test_oracle_examples():
    assert oracle_sat(parse("x in {}"), 3) is None
    assert oracle_sat(parse("x != x"), 3) is None
    assert oracle_sat(parse("x in y & y in x"), 3) is None
    M = oracle_sat(parse("x in y"), 1)
    assert M == {"x": zero, "y": one}


def test_oracle_first_model_is_canonical():
    M = oracle_sat(parse("x != y & y != z"), 2)
    assert M == {"x": zero, "y": one, "z": zero}


def test_oracle_guards():
    with pytest.raises(ValueError):
        oracle_sat(parse("a = b & c = d & e = a"), 1)
    with pytest.raises(ValueError):
        oracle_sat(parse("x = y"), 4)


def test_render_model():
    assert render_model({"y": one, "x": zero}) == "x = {}\ny = {{}}"


@settings(max_examples=200)
@given(small_formulas_st())
def test_oracle_model_satisfies(f):
    M = oracle_sat(f, 2)
    if M is not None:
        assert satisfies(M, f)
    else:
        for a in hf_universe(2):
            for b in hf_universe(2):
                assert not satisfies({"x": a, "y": b}, f)
