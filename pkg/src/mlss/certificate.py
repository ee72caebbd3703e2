"""UNSAT certificates: recorded tableau trees and an independent checker.

A certificate is a tree.  An inner node names a rule, the premises it used
and what it added to the branch; linear rules have one child, branching
rules one child per alternative.  A leaf names a closedness condition and
the formulas witnessing it.

The checker replays the tree from the initial formula.  It recomputes each
rule instance from its own table of rules, so it shares no rule code with
the search.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .levels import Untypeable, annotate, infer
from .parser import ParseError, parse, pretty
from .syntax import (
    And, AtomF, Diff, Empty, Eq, Formula, Inter, Mem, Neg, Or, Single, Term, Union, Var,
    subterms, vars_of,
)

FORMAT_VERSION = 1
CLOSE_KINDS = ("contradiction", "mem-empty", "neq-refl", "member-cycle")


@dataclass(frozen=True)
class CertLeaf:
    kind: str
    formulas: tuple[Formula, ...]


@dataclass(frozen=True)
class CertNode:
    rule: str
    premises: tuple[Formula, ...]
    added: tuple[Formula, ...]
    children: tuple["CertNode | CertLeaf", ...]
    alternatives: tuple[tuple[Formula, ...], ...] = ()
    witness: str | None = None


@dataclass(frozen=True)
class Certificate:
    formula: Formula
    mode: str
    root: CertNode | CertLeaf

    def to_json(self) -> dict:
        return {"formula": pretty(self.formula), "mode": self.mode, "root": _node_to_json(self.root)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data: dict) -> Certificate:
        try:
            return cls(_fm(data["formula"]), data["mode"], _node_from_json(data["root"]))
        except (KeyError, TypeError, ParseError) as e:
            raise CertificateFormatError(f"malformed certificate: {e}") from None

    @classmethod
    def loads(cls, text: str) -> Certificate:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise CertificateFormatError(f"certificate is not JSON: {e}") from None
        return cls.from_json(data)


class CertificateFormatError(ValueError):
    pass


def _fm(text: str) -> Formula:
    return parse(text, "<certificate>", allow_reserved=True)


def _node_to_json(n: CertNode | CertLeaf) -> dict:
    # linear chains are written iteratively to keep nesting cheap to build
    if isinstance(n, CertLeaf):
        return {"close": {"kind": n.kind, "formulas": [pretty(f) for f in n.formulas]}}
    out: dict[str, Any] = {
        "rule": n.rule,
        "premises": [pretty(f) for f in n.premises],
        "added": [pretty(f) for f in n.added],
    }
    if n.alternatives:
        out["alternatives"] = [[pretty(f) for f in alt] for alt in n.alternatives]
    if n.witness is not None:
        out["witness"] = n.witness
    out["children"] = [_node_to_json(c) for c in n.children]
    return out


def _node_from_json(d: dict) -> CertNode | CertLeaf:
    if "close" in d:
        c = d["close"]
        return CertLeaf(str(c["kind"]), tuple(_fm(x) for x in c["formulas"]))
    return CertNode(
        str(d["rule"]),
        tuple(_fm(x) for x in d.get("premises", [])),
        tuple(_fm(x) for x in d.get("added", [])),
        tuple(_node_from_json(c) for c in d["children"]),
        tuple(tuple(_fm(x) for x in alt) for alt in d.get("alternatives", [])),
        d.get("witness"),
    )


def count_leaves(n: CertNode | CertLeaf) -> int:
    if isinstance(n, CertLeaf):
        return 1
    return sum(count_leaves(c) for c in n.children)


def count_branching(n: CertNode | CertLeaf) -> int:
    if isinstance(n, CertLeaf):
        return 0
    own = 1 if n.alternatives else 0
    return own + sum(count_branching(c) for c in n.children)


# -- checking ---------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    ok: bool
    reason: str = ""
    path: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


class _Reject(Exception):
    def __init__(self, reason: str, path: tuple[int, ...]):
        super().__init__(reason)
        self.reason, self.path = reason, path


def _lit(f: Formula):
    """``(positive, kind, left, right)`` for a literal, else None."""
    pos = True
    if isinstance(f, Neg):
        pos, f = False, f.inner
    if not isinstance(f, AtomF):
        return None
    a = f.atom
    if isinstance(a, Mem):
        return pos, "in", a.elem, a.set
    return pos, "eq", a.left, a.right


def _m(s, t):
    return AtomF(Mem(s, t))


def _nm(s, t):
    return Neg(AtomF(Mem(s, t)))


def _e(s, t):
    return AtomF(Eq(s, t))


def _ne(s, t):
    return Neg(AtomF(Eq(s, t)))


def _sub_side(x: Term, old: Term, new: Term) -> Term:
    return new if x == old else x


def _linear_conclusions(rule: str, prem: tuple[Formula, ...], sub: frozenset[Term]) -> tuple[Formula, ...] | None:
    """Conclusions of a linear rule instance, or None if it is not one."""
    L = [_lit(p) for p in prem]

    def need(cond):
        if not cond:
            raise ValueError
        return True

    try:
        if rule == "prop.and":
            (p,) = prem
            need(isinstance(p, And))
            return (p.left, p.right)
        if rule == "prop.neg-or":
            (p,) = prem
            need(isinstance(p, Neg) and isinstance(p.inner, Or))
            return (Neg(p.inner.left), Neg(p.inner.right))
        if rule in ("prop.or-l", "prop.or-r"):
            p, q = prem
            need(isinstance(p, Or))
            if rule == "prop.or-l":
                need(q == Neg(p.left))
                return (p.right,)
            need(q == Neg(p.right))
            return (p.left,)
        if rule in ("prop.neg-and-l", "prop.neg-and-r"):
            p, q = prem
            need(isinstance(p, Neg) and isinstance(p.inner, And))
            if rule == "prop.neg-and-l":
                need(q == p.inner.left)
                return (Neg(p.inner.right),)
            need(q == p.inner.right)
            return (Neg(p.inner.left),)
        if rule == "prop.neg-neg":
            (p,) = prem
            need(isinstance(p, Neg) and isinstance(p.inner, Neg))
            return (p.inner.inner,)
        if rule == "single.intro":
            need(len(prem) == 0)
            raise _NeedsTerm
        if rule in ("single.mem", "single.notmem"):
            (l,) = L
            need(l is not None and l[1] == "in" and isinstance(l[3], Single))
            pos = rule == "single.mem"
            need(l[0] == pos)
            return (_e(l[2], l[3].inner) if pos else _ne(l[2], l[3].inner),)
        if rule in ("eq.subst-lr", "eq.subst-rl"):
            e, l = L
            need(e is not None and e[0] and e[1] == "eq" and l is not None)
            old, new = (e[2], e[3]) if rule == "eq.subst-lr" else (e[3], e[2])
            need(old in (l[2], l[3]))
            s, t = _sub_side(l[2], old, new), _sub_side(l[3], old, new)
            atom = Mem(s, t) if l[1] == "in" else Eq(s, t)
            return (AtomF(atom) if l[0] else Neg(AtomF(atom)),)
        if rule == "eq.neq":
            a, b = L
            need(a is not None and b is not None and a[1] == b[1] == "in")
            need(a[0] and not b[0] and a[3] == b[3])
            return (_ne(a[2], b[2]),)
        return _setop(rule, L, sub, need)
    except (ValueError, TypeError, AttributeError):
        return None


class _NeedsTerm(Exception):
    pass


def _setop(rule, L, sub, need):
    for l in L:
        need(l is not None and l[1] == "in")
    if rule == "union.notmem":
        (a,) = L
        need(not a[0] and isinstance(a[3], Union))
        return (_nm(a[2], a[3].left), _nm(a[2], a[3].right))
    if rule in ("union.mem-elim-l", "union.mem-elim-r"):
        a, b = L
        need(a[0] and isinstance(a[3], Union) and not b[0] and a[2] == b[2])
        if rule == "union.mem-elim-l":
            need(b[3] == a[3].left)
            return (_m(a[2], a[3].right),)
        need(b[3] == a[3].right)
        return (_m(a[2], a[3].left),)
    if rule == "inter.mem":
        (a,) = L
        need(a[0] and isinstance(a[3], Inter))
        return (_m(a[2], a[3].left), _m(a[2], a[3].right))
    if rule in ("inter.notmem-elim-l", "inter.notmem-elim-r"):
        a, b = L
        need(not a[0] and isinstance(a[3], Inter) and b[0] and a[2] == b[2])
        if rule == "inter.notmem-elim-l":
            need(b[3] == a[3].left)
            return (_nm(a[2], a[3].right),)
        need(b[3] == a[3].right)
        return (_nm(a[2], a[3].left),)
    if rule == "diff.mem":
        (a,) = L
        need(a[0] and isinstance(a[3], Diff))
        return (_m(a[2], a[3].left), _nm(a[2], a[3].right))
    if rule == "diff.notmem-elim-l":
        a, b = L
        need(not a[0] and isinstance(a[3], Diff) and b[0] and a[2] == b[2] and b[3] == a[3].left)
        return (_m(a[2], a[3].right),)
    if rule == "diff.notmem-elim-r":
        a, b = L
        need(not a[0] and isinstance(a[3], Diff) and not b[0] and a[2] == b[2] and b[3] == a[3].right)
        return (_nm(a[2], a[3].left),)
    raise _NeedsTerm


def _intro_conclusions(rule: str, prem: tuple[Formula, ...], added: tuple[Formula, ...], sub: frozenset[Term]):
    """Rules whose conclusion names a compound subterm of the initial formula.

    The compound term is read off the recorded conclusion and then checked
    against the premises and the subterm side condition.
    """
    if len(added) != 1:
        return None
    c = _lit(added[0])
    L = [_lit(p) for p in prem]
    if c is None or c[1] != "in" or any(l is None or l[1] != "in" for l in L):
        return None
    pos, s, u = c[0], c[2], c[3]
    if u not in sub:
        return None
    if rule == "single.intro":
        ok = not prem and pos and isinstance(u, Single) and u.inner == s
        return added if ok else None
    if any(l[2] != s for l in L):
        return None
    signs = tuple((l[0], l[3]) for l in L)
    expect = {
        "union.mem-intro-l": (Union, True, lambda u: ((True, u.left),)),
        "union.mem-intro-r": (Union, True, lambda u: ((True, u.right),)),
        "union.notmem-intro": (Union, False, lambda u: ((False, u.left), (False, u.right))),
        "inter.mem-intro": (Inter, True, lambda u: ((True, u.left), (True, u.right))),
        "inter.notmem-intro-l": (Inter, False, lambda u: ((False, u.left),)),
        "inter.notmem-intro-r": (Inter, False, lambda u: ((False, u.right),)),
        "diff.mem-intro": (Diff, True, lambda u: ((True, u.left), (False, u.right))),
        "diff.notmem-intro-l": (Diff, False, lambda u: ((False, u.left),)),
        "diff.notmem-intro-r": (Diff, False, lambda u: ((True, u.right),)),
    }.get(rule)
    if expect is None:
        return None
    op, cpos, prem_of = expect
    if not isinstance(u, op) or pos != cpos or signs != prem_of(u):
        return None
    return added


_BRANCHING = ("branch.or", "branch.neg-and", "branch.union", "branch.inter", "branch.diff", "branch.witness")


def _branch_alternatives(rule, prem, alts, witness, sub, branch_vars):
    """Recompute the alternatives of a branching instance, or None."""
    if len(prem) != 1:
        return None
    p = prem[0]
    if rule == "branch.or":
        if not isinstance(p, Or):
            return None
        return ((p.left,), (Neg(p.left),))
    if rule == "branch.neg-and":
        if not (isinstance(p, Neg) and isinstance(p.inner, And)):
            return None
        return ((Neg(p.inner.left),), (p.inner.left,))
    l = _lit(p)
    if l is None:
        return None
    if rule == "branch.witness":
        if l[0] or l[1] != "eq" or l[2] not in sub or l[3] not in sub:
            return None
        if witness is None or not witness or witness in branch_vars:
            return None
        x = Var(witness)
        return ((_m(x, l[2]), _nm(x, l[3])), (_nm(x, l[2]), _m(x, l[3])))
    if not l[0] or l[1] != "in":
        return None
    s, t = l[2], l[3]
    if rule == "branch.union":
        if not (isinstance(t, Union) and t in sub):
            return None
        o = t.left
    else:
        # the cut formula is read off the first alternative
        if len(alts) != 2 or len(alts[0]) != 1:
            return None
        c = _lit(alts[0][0])
        if c is None or not c[0] or c[1] != "in" or c[2] != s:
            return None
        o = c[3]
        if rule == "branch.inter":
            if Inter(t, o) not in sub and Inter(o, t) not in sub:
                return None
        elif rule == "branch.diff":
            if Diff(t, o) not in sub:
                return None
        else:
            return None
    return ((_m(s, o),), (_nm(s, o),))


def _member_cycle_ok(fs: tuple[Formula, ...]) -> bool:
    edges = []
    for f in fs:
        l = _lit(f)
        if l is None or not l[0] or l[1] != "in":
            return False
        edges.append((l[2], l[3]))
    if not edges:
        return False
    for i, (s, t) in enumerate(edges):
        if t != edges[(i + 1) % len(edges)][0]:
            return False
    return True


def _leaf_ok(leaf: CertLeaf, fset) -> str | None:
    if not leaf.formulas or any(f not in fset for f in leaf.formulas):
        return "closing formulas are not on the branch"
    fs = leaf.formulas
    if leaf.kind == "contradiction":
        if len(fs) == 2 and fs[1] == Neg(fs[0]):
            return None
        return "not a contradictory pair"
    if leaf.kind == "mem-empty":
        l = _lit(fs[0]) if len(fs) == 1 else None
        if l is not None and l[0] and l[1] == "in" and isinstance(l[3], Empty):
            return None
        return "not a membership in the empty set"
    if leaf.kind == "neq-refl":
        l = _lit(fs[0]) if len(fs) == 1 else None
        if l is not None and not l[0] and l[1] == "eq" and l[2] == l[3]:
            return None
        return "not a reflexive disequality"
    if leaf.kind == "member-cycle":
        return None if _member_cycle_ok(fs) else "not a membership cycle"
    return f"unknown closing condition {leaf.kind!r}"


def check_certificate(f: Formula, cert: Certificate) -> CheckResult:
    """Replay ``cert`` from the branch ``[f]``.

    Accepts only if every recorded step is an instance of a rule whose
    premises lie on the current branch, and every leaf is closed.
    """
    if cert.formula != f and cert.mode == "typed":
        try:
            f = annotate(f, infer(f).env)
        except Untypeable:
            pass
    if cert.formula != f:
        return CheckResult(False, "certificate is for a different formula", ())
    if cert.mode not in ("typed", "untyped"):
        return CheckResult(False, f"unknown mode {cert.mode!r}", ())
    sub = frozenset(subterms(f))
    # explicit stack: (node, formulas on the branch, variables on it, path)
    stack = [(cert.root, frozenset([f]), frozenset(vars_of(f)), ())]
    try:
        while stack:
            node, fset, bvars, path = stack.pop()
            if isinstance(node, CertLeaf):
                why = _leaf_ok(node, fset)
                if why is not None:
                    raise _Reject(why, path)
                continue
            if not isinstance(node, CertNode):
                raise _Reject("unknown node", path)
            if any(p not in fset for p in node.premises):
                raise _Reject(f"{node.rule}: premise not on the branch", path)
            if node.rule in _BRANCHING:
                if node.added:
                    raise _Reject(f"{node.rule}: branching node adds formulas directly", path)
                alts = _branch_alternatives(node.rule, node.premises, node.alternatives, node.witness, sub, bvars)
                if alts is None or alts != node.alternatives:
                    raise _Reject(f"{node.rule}: not an instance of the rule", path)
                if len(node.children) != len(alts):
                    raise _Reject(f"{node.rule}: expected {len(alts)} children", path)
                for i, (alt, child) in enumerate(zip(alts, node.children)):
                    nv = bvars | vars_of(list(alt))
                    stack.append((child, fset | set(alt), frozenset(nv), path + (i,)))
                continue
            if node.alternatives or node.witness is not None:
                raise _Reject(f"{node.rule}: linear node with alternatives", path)
            try:
                concl = _linear_conclusions(node.rule, node.premises, sub)
            except _NeedsTerm:
                concl = _intro_conclusions(node.rule, node.premises, node.added, sub)
            if concl is None:
                raise _Reject(f"{node.rule}: not an instance of the rule", path)
            if not node.added or set(node.added) - set(concl):
                raise _Reject(f"{node.rule}: added formulas are not its conclusions", path)
            if set(concl) - fset - set(node.added):
                raise _Reject(f"{node.rule}: conclusions missing from the added formulas", path)
            if len(node.children) != 1:
                raise _Reject(f"{node.rule}: expected one child", path)
            stack.append((node.children[0], fset | set(node.added), bvars, path + (0,)))
    except _Reject as r:
        return CheckResult(False, r.reason, r.path)
    return CheckResult(True)
