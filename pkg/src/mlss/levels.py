"""Level inference for set terms.

A level is a natural number: a term of level ``l + 1`` denotes a set whose
elements have level ``l``, and level-0 terms are *urelements* that need not
be sets at all.  Typing rules:

* ``{}@n`` has level ``n + 1``; ``{t}`` is one above ``t``; a variable has
  whatever the environment says;
* ``s + t``, ``s ^ t`` and ``s \\ t`` need both operands at the same
  non-zero level, which is also the level of the result;
* ``s = t`` needs equal levels, ``s in t`` needs ``t`` one above ``s``.

Inference generates equations over ``0``/successor/level variables and
solves them with a union-find whose edges carry integer offsets, then picks
the pointwise least natural-number solution.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterator

from .syntax import (
    BINARY_OPS, Empty, Eq, Formula, Single, Term, Var, iter_atoms, map_terms,
)


@dataclass(frozen=True)
class LevelExpr:
    """``var + offset``, or the constant ``offset`` when ``var`` is None."""

    var: str | None
    offset: int = 0

    def succ(self, k: int = 1) -> LevelExpr:
        return LevelExpr(self.var, self.offset + k)

    def __str__(self) -> str:
        if self.var is None:
            return str(self.offset)
        return self.var if self.offset == 0 else f"{self.var}+{self.offset}"


def const(n: int) -> LevelExpr:
    return LevelExpr(None, n)


def lvar(name: str) -> LevelExpr:
    return LevelExpr(name, 0)


@dataclass(frozen=True)
class LevelConstraint:
    left: LevelExpr
    right: LevelExpr
    origin: int | None = None  # index of the atom occurrence that produced it

    def __str__(self) -> str:
        return f"{self.left} = {self.right}"


@dataclass
class LevelEnv:
    """Levels of variables, and level tags of unannotated ``{}`` occurrences."""

    vars: dict[str, int] = field(default_factory=dict)
    empties: dict[int, int] = field(default_factory=dict)


class Untypeable(Exception):
    def __init__(self, message: str, constraints=(), atoms=()):
        self.constraints = list(constraints)
        self.atoms = sorted(set(atoms))
        super().__init__(message)


def var_level_name(x: str) -> str:
    return f"v:{x}"


def empty_level_name(k: int) -> str:
    return f"e:{k}"


# -- constraint generation --------------------------------------------------

def generate_constraints(f: Formula) -> tuple[list[LevelConstraint], dict[tuple, LevelExpr]]:
    """Level equations for ``f`` and the level of every term occurrence.

    Occurrences are addressed by paths ``(atom_index, side, child, ...)``
    with atoms numbered left to right.
    """
    cs: list[LevelConstraint] = []
    levels: dict[tuple, LevelExpr] = {}
    empties = iter(range(1 << 62))

    def term(t: Term, path: tuple, origin: int) -> LevelExpr:
        if isinstance(t, Var):
            e = lvar(var_level_name(t.name))
        elif isinstance(t, Empty):
            if t.level is None:
                e = lvar(empty_level_name(next(empties))).succ()
            else:
                e = const(t.level + 1)
        elif isinstance(t, Single):
            e = term(t.inner, path + (0,), origin).succ()
        else:
            name = "t:" + ".".join(map(str, path))
            e = lvar(name)
            l = term(t.left, path + (0,), origin)
            r = term(t.right, path + (1,), origin)
            cs.append(LevelConstraint(l, e, origin))
            cs.append(LevelConstraint(r, e, origin))
            # level != 0 as level = S i
            cs.append(LevelConstraint(e, lvar("i:" + ".".join(map(str, path))).succ(), origin))
        levels[path] = e
        return e

    for i, a in enumerate(iter_atoms(f)):
        s, t = a.sides
        ls = term(s, (i, 0), i)
        lt = term(t, (i, 1), i)
        if isinstance(a, Eq):
            cs.append(LevelConstraint(ls, lt, i))
        else:
            cs.append(LevelConstraint(lt, ls.succ(), i))
    return cs, levels


# -- solving ----------------------------------------------------------------

class _OffsetUnionFind:
    """Union-find over names where each node knows its offset to its parent."""

    def __init__(self):
        self.parent: dict[str, str] = {}
        self.off: dict[str, int] = {}  # level(node) - level(parent)
        self.edges: dict[str, list[tuple[str, int]]] = defaultdict(list)

    def add(self, v: str) -> None:
        if v not in self.parent:
            self.parent[v] = v
            self.off[v] = 0

    def find(self, v: str) -> tuple[str, int]:
        path = []
        while self.parent[v] != v:
            path.append(v)
            v = self.parent[v]
        root = v
        # compress, accumulating offsets from the top down
        acc = 0
        for node in reversed(path):
            acc += self.off[node]
            self.off[node] = acc
            self.parent[node] = root
        return root, (self.off[path[0]] if path else 0)

    def link(self, a: str, b: str, k: int, cidx: int) -> None:
        """Record ``level(a) = level(b) + k`` for ``a``, ``b`` in different classes."""
        ra, oa = self.find(a)
        rb, ob = self.find(b)
        # level(ra) + oa = level(rb) + ob + k
        self.parent[ra] = rb
        self.off[ra] = ob + k - oa
        self.edges[a].append((b, cidx))
        self.edges[b].append((a, cidx))

    def explain(self, a: str, b: str) -> list[int]:
        """Constraint indices on the tree path linking ``a`` and ``b``."""
        if a == b:
            return []
        prev: dict[str, tuple[str, int]] = {a: (a, -1)}
        queue = deque([a])
        while queue:
            u = queue.popleft()
            if u == b:
                break
            for w, c in self.edges[u]:
                if w not in prev:
                    prev[w] = (u, c)
                    queue.append(w)
        out = []
        u = b
        while u != a and u in prev:
            u, c = prev[u]
            out.append(c)
        return out


def solve_min(constraints: list[LevelConstraint]) -> dict[str, int]:
    """Pointwise least natural-number solution of the level equations.

    Returns a level for every level variable mentioned.  Raises
    :class:`Untypeable` with the offending constraints when there is none.
    """
    uf = _OffsetUnionFind()
    # root -> (value of root, constraint index fixing it, node it was fixed through)
    fixed: dict[str, tuple[int, int, str]] = {}

    def fail(msg: str, idxs):
        idxs = sorted(set(idxs))
        raise Untypeable(
            msg,
            [constraints[i] for i in idxs],
            [constraints[i].origin for i in idxs if constraints[i].origin is not None],
        )

    def fix(v: str, value_of_v: int, cidx: int) -> None:
        root, o = uf.find(v)
        root_value = value_of_v - o
        if root in fixed:
            prev_value, prev_c, prev_node = fixed[root]
            if prev_value != root_value:
                fail("conflicting constant levels", [cidx, prev_c] + uf.explain(v, prev_node))
        else:
            fixed[root] = (root_value, cidx, v)

    for ci, c in enumerate(constraints):
        for e in (c.left, c.right):
            if e.var is not None:
                uf.add(e.var)
    for ci, c in enumerate(constraints):
        l, r = c.left, c.right
        if l.var is None and r.var is None:
            if l.offset != r.offset:
                fail("conflicting constant levels", [ci])
        elif l.var is None or r.var is None:
            e, n = (r, l.offset) if l.var is None else (l, r.offset)
            fix(e.var, n - e.offset, ci)
        else:
            ra, oa = uf.find(l.var)
            rb, ob = uf.find(r.var)
            if ra == rb:
                if oa + l.offset != ob + r.offset:
                    fail("level cycle with non-zero offset", [ci] + uf.explain(l.var, r.var))
                continue
            # constant anchors of either class, re-expressed on their own node
            saved = []
            for root in (ra, rb):
                if root in fixed:
                    value, cidx, node = fixed.pop(root)
                    saved.append((node, value + uf.find(node)[1], cidx))
            # level(l.var) = level(r.var) + (r.offset - l.offset)
            uf.link(l.var, r.var, r.offset - l.offset, ci)
            for node, value, cidx in saved:
                fix(node, value, cidx)

    classes: dict[str, list[tuple[str, int]]] = defaultdict(list)
    for v in uf.parent:
        root, o = uf.find(v)
        classes[root].append((v, o))

    out: dict[str, int] = {}
    for root, members in classes.items():
        if root in fixed:
            base, cidx, node = fixed[root]
            for v, o in members:
                if base + o < 0:
                    fail("a level would have to be negative", [cidx] + uf.explain(node, v))
        else:
            base = max(0, max(-o for _, o in members))
        for v, o in members:
            out[v] = base + o
    return out


# -- inference --------------------------------------------------------------

@dataclass
class Typing:
    env: LevelEnv
    urelems: frozenset[Term]
    constraints: list[LevelConstraint]

    def level(self, t: Term, extra: dict[str, int] | None = None) -> int | None:
        levels = dict(self.env.vars)
        if extra:
            levels.update(extra)
        return level_of(t, levels)


def infer(f: Formula) -> Typing:
    """Minimal level environment for ``f`` and its urelements.

    Raises :class:`Untypeable`.
    """
    cs, _ = generate_constraints(f)
    sol = solve_min(cs)
    env = LevelEnv()
    for name, value in sol.items():
        if name.startswith("v:"):
            env.vars[name[2:]] = value
        elif name.startswith("e:"):
            env.empties[int(name[2:])] = value
    for a in iter_atoms(f):
        for s in a.sides:
            for x in _iter_vars(s):
                env.vars.setdefault(x, 0)
    urelems = frozenset(Var(x) for x, l in env.vars.items() if l == 0)
    return Typing(env, urelems, cs)


def _iter_vars(t: Term) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    elif isinstance(t, Single):
        yield from _iter_vars(t.inner)
    elif isinstance(t, BINARY_OPS):
        yield from _iter_vars(t.left)
        yield from _iter_vars(t.right)


def annotate(f: Formula, env: LevelEnv) -> Formula:
    """Replace the k-th unannotated ``{}`` (left to right) by ``{}@env.empties[k]``."""
    counter = iter(range(1 << 62))

    def term(t: Term) -> Term:
        if isinstance(t, Empty):
            if t.level is None:
                return Empty(env.empties[next(counter)])
            return t
        if isinstance(t, Single):
            return Single(term(t.inner))
        if isinstance(t, BINARY_OPS):
            return type(t)(term(t.left), term(t.right))
        return t

    # map_terms visits atoms left to right, sides left to right
    return map_terms(f, term)


# -- direct checking of the rules -------------------------------------------

def level_of(t: Term, levels: dict[str, int], empties=None) -> int | None:
    """Level of ``t`` by the typing rules, or None if ``t`` is ill-typed.

    ``empties`` supplies tags for unannotated ``{}`` occurrences in order;
    without it such occurrences are ill-typed.
    """
    if isinstance(t, Var):
        return levels.get(t.name)
    if isinstance(t, Empty):
        if t.level is not None:
            return t.level + 1
        if empties is None:
            return None
        tag = next(empties, None)
        return None if tag is None else tag + 1
    if isinstance(t, Single):
        l = level_of(t.inner, levels, empties)
        return None if l is None else l + 1
    l = level_of(t.left, levels, empties)
    r = level_of(t.right, levels, empties)
    if l is None or l != r or l == 0:
        return None
    return l


def atom_typed(a, levels: dict[str, int], empties=None) -> bool:
    s, t = a.sides
    ls = level_of(s, levels, empties)
    lt = level_of(t, levels, empties)
    if ls is None or lt is None:
        return False
    return ls == lt if isinstance(a, Eq) else lt == ls + 1


def check_formula(f: Formula, env: LevelEnv) -> bool:
    """Whether every atom of ``f`` type-checks under ``env``."""
    tags = iter([env.empties[k] for k in sorted(env.empties)])
    return all(atom_typed(a, env.vars, tags) for a in iter_atoms(f))


def literal_typed(f: Formula, levels: dict[str, int]) -> bool:
    """Type-check an annotated formula under variable levels."""
    return all(atom_typed(a, levels) for a in iter_atoms(f))
