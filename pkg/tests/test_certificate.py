import json

import pytest

from mlss.certificate import (
    CertLeaf, CertNode, Certificate, CertificateFormatError, check_certificate, count_branching,
    count_leaves,
)
from mlss.levels import Untypeable
from mlss.parser import parse
from mlss.solver import Unsat, decide
from mlss.syntax import Var, mem, notmem

UNSAT = [
    "x in {}", "x != x", "x in y & y in x", "~~~(x in y) & x in y",
    "x in y + z & x notin y & x notin z", "x = {y} & y notin x",
    "(x in y | x in z) & x notin y & x notin z", "x in y ^ z & x notin z",
    "x in y \\ z & x in z", "x != y & x <= y & y <= x", "{x} = {y} & x != y",
]


@pytest.mark.parametrize("src", UNSAT)
@pytest.mark.parametrize("mode", ["untyped", "typed"])
def test_round_trip(src, mode):
    f = parse(src)
    try:
        r = decide(f, mode)
    except Untypeable:
        assert mode == "typed"
        return
    assert isinstance(r, Unsat)
    c = Certificate.loads(r.certificate.dumps())
    assert c == r.certificate
    assert check_certificate(f, c)
    assert count_leaves(c.root) <= 2 ** count_branching(c.root)


def test_json_shape():
    r = decide(parse("x in y & y in x"), "untyped")
    d = json.loads(r.certificate.dumps())
    assert d["formula"] == "x in y & y in x" and d["mode"] == "untyped"
    assert d["root"]["rule"] == "prop.and"
    assert d["root"]["children"][0]["close"]["kind"] == "member-cycle"


def test_rejections():
    f = parse("x in y & y in x")
    good = decide(f, "untyped").certificate
    root = good.root
    swapped = Certificate(f, "untyped", CertNode("prop.neg-or", root.premises, root.added, root.children))
    assert not check_certificate(f, swapped)
    dropped = Certificate(f, "untyped", CertNode(root.rule, root.premises, root.added, ()))
    assert not check_certificate(f, dropped)
    x, y = Var("x"), Var("y")
    altered = Certificate(f, "untyped", CertNode(root.rule, root.premises, (mem(x, y), mem(x, x)), root.children))
    assert not check_certificate(f, altered)
    open_leaf = Certificate(f, "untyped", CertLeaf("member-cycle", (mem(x, y),)))
    assert not check_certificate(f, open_leaf)
    assert not check_certificate(parse("x in y"), good)


def test_witness_must_be_fresh():
    f = parse("x != y & x = y")
    alts = ((mem(Var("x"), Var("x")), notmem(Var("x"), Var("y"))), (notmem(Var("x"), Var("x")), mem(Var("x"), Var("y"))))
    node = CertNode("branch.witness", (parse("x != y"),), (), (CertLeaf("contradiction", ()),) * 2, alts, "x")
    pre = CertNode("prop.and", (f,), (parse("x != y"), parse("x = y")), (node,))
    assert not check_certificate(f, Certificate(f, "untyped", pre))


def test_malformed_json():
    with pytest.raises(CertificateFormatError):
        Certificate.loads("{")
    with pytest.raises(CertificateFormatError):
        Certificate.loads('{"formula": "x in", "mode": "typed", "root": {}}')
