"""Branches, closedness and the expansion rules of the MLSS tableau calculus.

A branch is kept in the order formulas were added, so ``branch.formulas[0]``
is the initial formula.  Rule instances are reported as :class:`LinearStep`
and :class:`BranchStep` values naming their rule by a stable id; these ids
are the vocabulary of certificates.

Rules never create terms outside the subterms of the initial formula,
except the witness rule, which introduces a fresh variable.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .syntax import (
    And, AtomF, Diff, Empty, Eq, Formula, Inter, Literal, Mem, Neg, Or, Single, Term,
    Union, Var, eq, mem, neq, notmem, sorted_canonical, subfms, subst_top_level,
    subterms, vars_of,
)

PROP_RULES = (
    "prop.and", "prop.neg-or", "prop.or-l", "prop.or-r",
    "prop.neg-and-l", "prop.neg-and-r", "prop.neg-neg",
)
SINGLE_RULES = ("single.intro", "single.mem", "single.notmem")
UNION_RULES = (
    "union.notmem", "union.mem-intro-l", "union.mem-intro-r",
    "union.mem-elim-l", "union.mem-elim-r", "union.notmem-intro",
)
INTER_RULES = (
    "inter.mem", "inter.mem-intro", "inter.notmem-intro-l",
    "inter.notmem-intro-r", "inter.notmem-elim-l", "inter.notmem-elim-r",
)
DIFF_RULES = (
    "diff.mem", "diff.mem-intro", "diff.notmem-intro-l",
    "diff.notmem-intro-r", "diff.notmem-elim-l", "diff.notmem-elim-r",
)
EQ_RULES = ("eq.subst-lr", "eq.subst-rl", "eq.neq")

LINEAR_RULES = PROP_RULES + SINGLE_RULES + UNION_RULES + INTER_RULES + DIFF_RULES + EQ_RULES
BRANCHING_RULES = (
    "branch.or", "branch.neg-and", "branch.union", "branch.inter", "branch.diff", "branch.witness",
)
ALL_RULES = LINEAR_RULES + BRANCHING_RULES

WITNESS_PREFIX = "_w"


def branch_bound(phi: Formula) -> int:
    """Upper bound on the number of distinct formulas in any branch grown from ``phi``."""
    return 2 * len(subfms(phi)) + 16 * len(subterms(phi)) ** 4


@dataclass(frozen=True)
class CloseReason:
    kind: str  # 'contradiction', 'mem-empty', 'neq-refl' or 'member-cycle'
    formulas: tuple[Formula, ...]


@dataclass(frozen=True)
class LinearStep:
    rule: str
    premises: tuple[Formula, ...]
    conclusions: tuple[Formula, ...]


@dataclass(frozen=True)
class BranchStep:
    rule: str
    premises: tuple[Formula, ...]
    alternatives: tuple[tuple[Formula, ...], ...]
    fresh_witness: str | None = None


class _Root:
    """Facts about the initial formula, shared by every branch grown from it."""

    def __init__(self, phi: Formula):
        self.phi = phi
        self.subterms = frozenset(subterms(phi))
        self.vars = frozenset(vars_of(phi))
        ordered = sorted_canonical(self.subterms)
        self.singles = [t for t in ordered if isinstance(t, Single)]
        self.by_left: dict[type, dict[Term, list[Term]]] = {op: defaultdict(list) for op in (Union, Inter, Diff)}
        self.by_right: dict[type, dict[Term, list[Term]]] = {op: defaultdict(list) for op in (Union, Inter, Diff)}
        self.compounds: dict[type, list[Term]] = {op: [] for op in (Union, Inter, Diff)}
        for t in ordered:
            if isinstance(t, (Union, Inter, Diff)):
                self.by_left[type(t)][t.left].append(t)
                self.by_right[type(t)][t.right].append(t)
                self.compounds[type(t)].append(t)


class _Index:
    """Literal index of a branch."""

    def __init__(self, formulas: Iterable[Formula]):
        self.literals: list[tuple[Formula, Literal]] = []
        self.pos_mem: list[tuple[Term, Term]] = []
        self.neg_mem: list[tuple[Term, Term]] = []
        self.pos_eq: list[tuple[Term, Term]] = []
        self.neg_eq: list[tuple[Term, Term]] = []
        self.pos_by_set: dict[Term, list[Term]] = defaultdict(list)
        self.neg_by_set: dict[Term, list[Term]] = defaultdict(list)
        self.pos_by_elem: dict[Term, list[Term]] = defaultdict(list)
        for f in formulas:
            self.add(f)

    def add(self, f: Formula) -> None:
        lit = Literal.of(f)
        if lit is None:
            return
        self.literals.append((f, lit))
        a = lit.atom
        if isinstance(a, Mem):
            s, t = a.elem, a.set
            if lit.positive:
                self.pos_mem.append((s, t))
                self.pos_by_set[t].append(s)
                self.pos_by_elem[s].append(t)
            else:
                self.neg_mem.append((s, t))
                self.neg_by_set[t].append(s)
        else:
            (self.pos_eq if lit.positive else self.neg_eq).append((a.left, a.right))


class Branch:
    """An immutable tableau branch.

    ``formulas`` holds the distinct formulas in the order they were added;
    the first is the initial formula.
    """

    def __init__(self, formulas: Iterable[Formula], _root: _Root | None = None):
        fs: list[Formula] = []
        seen: set[Formula] = set()
        for f in formulas:
            if f not in seen:
                seen.add(f)
                fs.append(f)
        if not fs:
            raise ValueError("a branch holds at least its initial formula")
        self.formulas: tuple[Formula, ...] = tuple(fs)
        self.fset: frozenset[Formula] = frozenset(seen)
        self._root = _root if _root is not None and _root.phi == fs[0] else _Root(fs[0])

    @classmethod
    def initial(cls, phi: Formula) -> Branch:
        return cls([phi])

    @property
    def phi(self) -> Formula:
        """The initial formula."""
        return self.formulas[0]

    @property
    def root_subterms(self) -> frozenset[Term]:
        return self._root.subterms

    def __contains__(self, f: Formula) -> bool:
        return f in self.fset

    def __len__(self) -> int:
        return len(self.formulas)

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.formulas)

    def __repr__(self) -> str:
        return f"Branch({len(self.formulas)} formulas)"

    def new_formulas(self, fs: Iterable[Formula]) -> list[Formula]:
        out, seen = [], set()
        for f in fs:
            if f not in self.fset and f not in seen:
                seen.add(f)
                out.append(f)
        return out

    def extend(self, fs: Iterable[Formula]) -> Branch:
        new = self.new_formulas(fs)
        if not new:
            return self
        b = Branch.__new__(Branch)
        b.formulas = self.formulas + tuple(new)
        b.fset = self.fset.union(new)
        b._root = self._root
        return b

    @cached_property
    def index(self) -> _Index:
        return _Index(self.formulas)

    @cached_property
    def vars(self) -> frozenset[str]:
        return frozenset(vars_of(self.formulas))

    @cached_property
    def wits(self) -> frozenset[str]:
        return self.vars - self._root.vars


# -- closedness -------------------------------------------------------------

def _find_cycle(edges: list[tuple[Term, Term]]) -> list[tuple[Term, Term]] | None:
    """Some directed cycle (self-loops included) as a list of edges, via DFS."""
    succ: dict[Term, list[Term]] = defaultdict(list)
    for s, t in edges:
        succ[s].append(t)
    WHITE, GREY, BLACK = 0, 1, 2
    colour: dict[Term, int] = defaultdict(int)
    for start in list(succ):
        if colour[start] != WHITE:
            continue
        stack = [(start, iter(succ[start]))]
        path = [start]
        colour[start] = GREY
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = BLACK
                stack.pop()
                path.pop()
                continue
            if colour[nxt] == GREY:
                cyc_nodes = path[path.index(nxt):]
                return [(cyc_nodes[i], cyc_nodes[(i + 1) % len(cyc_nodes)]) for i in range(len(cyc_nodes))]
            if colour[nxt] == WHITE:
                colour[nxt] = GREY
                path.append(nxt)
                stack.append((nxt, iter(succ[nxt])))
    return None


def is_closed(b: Branch) -> CloseReason | None:
    """The first reason ``b`` is closed, or None if it is open."""
    for f in b.formulas:
        if Neg(f) in b:
            return CloseReason("contradiction", (f, Neg(f)))
    idx = b.index
    for s, t in idx.pos_mem:
        if isinstance(t, Empty):
            return CloseReason("mem-empty", (mem(s, t),))
    for s, t in idx.neg_eq:
        if s == t:
            return CloseReason("neq-refl", (neq(s, t),))
    cyc = _find_cycle(idx.pos_mem)
    if cyc is not None:
        return CloseReason("member-cycle", tuple(mem(s, t) for s, t in cyc))
    return None


def closed_by_new(b: Branch, new: Iterable[Formula]) -> CloseReason | None:
    """Closedness of ``b`` assuming it was open before ``new`` was added."""
    new = list(new)
    for f in new:
        if Neg(f) in b:
            return CloseReason("contradiction", (f, Neg(f)))
        if isinstance(f, Neg) and f.inner in b:
            return CloseReason("contradiction", (f.inner, f))
    for f in new:
        if isinstance(f, AtomF) and isinstance(f.atom, Mem) and isinstance(f.atom.set, Empty):
            return CloseReason("mem-empty", (f,))
    for f in new:
        if isinstance(f, Neg) and isinstance(f.inner, AtomF):
            a = f.inner.atom
            if isinstance(a, Eq) and a.left == a.right:
                return CloseReason("neq-refl", (f,))
    succ = b.index.pos_by_elem
    for f in new:
        if isinstance(f, AtomF) and isinstance(f.atom, Mem):
            s, t = f.atom.elem, f.atom.set
            path = _path(succ, t, s)
            if path is not None:
                nodes = [s] + path
                return CloseReason(
                    "member-cycle", tuple(mem(nodes[i], nodes[i + 1]) for i in range(len(nodes) - 1))
                )
    return None


def _path(succ: dict[Term, list[Term]], src: Term, dst: Term) -> list[Term] | None:
    """Nodes of a shortest path ``src .. dst`` in the membership graph."""
    prev = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            out = []
            while u is not None:
                out.append(u)
                u = prev[u]
            return out[::-1]
        for w in succ.get(u, ()):
            if w not in prev:
                prev[w] = u
                queue.append(w)
    return None


# -- linear rules -----------------------------------------------------------

def _prop_candidates(b: Branch) -> Iterator[LinearStep]:
    fs = b.fset
    for f in b.formulas:
        if isinstance(f, And):
            yield LinearStep("prop.and", (f,), (f.left, f.right))
        elif isinstance(f, Neg):
            g = f.inner
            if isinstance(g, Or):
                yield LinearStep("prop.neg-or", (f,), (Neg(g.left), Neg(g.right)))
            elif isinstance(g, And):
                if g.left in fs:
                    yield LinearStep("prop.neg-and-l", (f, g.left), (Neg(g.right),))
                if g.right in fs:
                    yield LinearStep("prop.neg-and-r", (f, g.right), (Neg(g.left),))
            elif isinstance(g, Neg):
                yield LinearStep("prop.neg-neg", (f,), (g.inner,))
        elif isinstance(f, Or):
            if Neg(f.left) in fs:
                yield LinearStep("prop.or-l", (f, Neg(f.left)), (f.right,))
            if Neg(f.right) in fs:
                yield LinearStep("prop.or-r", (f, Neg(f.right)), (f.left,))


def _single_candidates(b: Branch) -> Iterator[LinearStep]:
    for t in b._root.singles:
        yield LinearStep("single.intro", (), (mem(t.inner, t),))
    for f, lit in b.index.literals:
        a = lit.atom
        if isinstance(a, Mem) and isinstance(a.set, Single):
            if lit.positive:
                yield LinearStep("single.mem", (f,), (eq(a.elem, a.set.inner),))
            else:
                yield LinearStep("single.notmem", (f,), (neq(a.elem, a.set.inner),))


def _set_op_candidates(b: Branch) -> Iterator[LinearStep]:
    idx, root, fs = b.index, b._root, b.fset
    # premises that are a single membership literal on a compound term
    for f, lit in idx.literals:
        a = lit.atom
        if not isinstance(a, Mem):
            continue
        s, t = a.elem, a.set
        if isinstance(t, Union):
            if not lit.positive:
                yield LinearStep("union.notmem", (f,), (notmem(s, t.left), notmem(s, t.right)))
            else:
                g = notmem(s, t.left)
                if g in fs:
                    yield LinearStep("union.mem-elim-l", (f, g), (mem(s, t.right),))
                g = notmem(s, t.right)
                if g in fs:
                    yield LinearStep("union.mem-elim-r", (f, g), (mem(s, t.left),))
    for f, lit in idx.literals:
        a = lit.atom
        if not isinstance(a, Mem):
            continue
        s, t = a.elem, a.set
        if lit.positive:
            for u in root.by_left[Union].get(t, ()):
                yield LinearStep("union.mem-intro-l", (f,), (mem(s, u),))
            for u in root.by_right[Union].get(t, ()):
                yield LinearStep("union.mem-intro-r", (f,), (mem(s, u),))
        else:
            for u in root.by_left[Union].get(t, ()):
                g = notmem(s, u.right)
                if g in fs:
                    yield LinearStep("union.notmem-intro", (f, g), (notmem(s, u),))

    for f, lit in idx.literals:
        a = lit.atom
        if not isinstance(a, Mem):
            continue
        s, t = a.elem, a.set
        if isinstance(t, Inter):
            if lit.positive:
                yield LinearStep("inter.mem", (f,), (mem(s, t.left), mem(s, t.right)))
            else:
                g = mem(s, t.left)
                if g in fs:
                    yield LinearStep("inter.notmem-elim-l", (f, g), (notmem(s, t.right),))
                g = mem(s, t.right)
                if g in fs:
                    yield LinearStep("inter.notmem-elim-r", (f, g), (notmem(s, t.left),))
        if lit.positive:
            for u in root.by_left[Inter].get(t, ()):
                g = mem(s, u.right)
                if g in fs:
                    yield LinearStep("inter.mem-intro", (f, g), (mem(s, u),))
        else:
            for u in root.by_left[Inter].get(t, ()):
                yield LinearStep("inter.notmem-intro-l", (f,), (notmem(s, u),))
            for u in root.by_right[Inter].get(t, ()):
                yield LinearStep("inter.notmem-intro-r", (f,), (notmem(s, u),))

    for f, lit in idx.literals:
        a = lit.atom
        if not isinstance(a, Mem):
            continue
        s, t = a.elem, a.set
        if isinstance(t, Diff):
            if lit.positive:
                yield LinearStep("diff.mem", (f,), (mem(s, t.left), notmem(s, t.right)))
            else:
                g = mem(s, t.left)
                if g in fs:
                    yield LinearStep("diff.notmem-elim-l", (f, g), (mem(s, t.right),))
                g = notmem(s, t.right)
                if g in fs:
                    yield LinearStep("diff.notmem-elim-r", (f, g), (notmem(s, t.left),))
        if lit.positive:
            for u in root.by_left[Diff].get(t, ()):
                g = notmem(s, u.right)
                if g in fs:
                    yield LinearStep("diff.mem-intro", (f, g), (mem(s, u),))
            for u in root.by_right[Diff].get(t, ()):
                yield LinearStep("diff.notmem-intro-r", (f,), (notmem(s, u),))
        else:
            for u in root.by_left[Diff].get(t, ()):
                yield LinearStep("diff.notmem-intro-l", (f,), (notmem(s, u),))


def _eq_candidates(b: Branch) -> Iterator[LinearStep]:
    idx = b.index
    for t1, t2 in idx.pos_eq:
        if t1 == t2:
            continue
        e = eq(t1, t2)
        for f, lit in idx.literals:
            sides = lit.atom.sides
            if t1 in sides:
                yield LinearStep("eq.subst-lr", (e, f), (subst_top_level(lit, t1, t2).to_formula(),))
            if t2 in sides:
                yield LinearStep("eq.subst-rl", (e, f), (subst_top_level(lit, t2, t1).to_formula(),))
    for t, elems in idx.pos_by_set.items():
        outs = idx.neg_by_set.get(t)
        if not outs:
            continue
        for s1 in elems:
            for s2 in outs:
                yield LinearStep("eq.neq", (mem(s1, t), notmem(s2, t)), (neq(s1, s2),))


def _linear_candidates(b: Branch) -> Iterator[LinearStep]:
    yield from _prop_candidates(b)
    yield from _single_candidates(b)
    yield from _set_op_candidates(b)
    yield from _eq_candidates(b)


def iter_linear_expansions(b: Branch, disabled: frozenset[str] = frozenset()) -> Iterator[LinearStep]:
    """Progress-making linear rule instances in priority order."""
    fs = b.fset
    seen = set()
    for step in _linear_candidates(b):
        if step.rule in disabled:
            continue
        if all(c in fs for c in step.conclusions):
            continue
        if step in seen:
            continue
        seen.add(step)
        yield step


def linear_expansions(b: Branch, disabled: frozenset[str] = frozenset()) -> list[LinearStep]:
    return list(iter_linear_expansions(b, disabled))


def is_lin_sat(b: Branch, disabled: frozenset[str] = frozenset()) -> bool:
    return next(iter_linear_expansions(b, disabled), None) is None


# -- branching rules --------------------------------------------------------

def fresh_witness(b: Branch) -> str:
    k = len(b.wits)
    while f"{WITNESS_PREFIX}{k}" in b.vars:
        k += 1
    return f"{WITNESS_PREFIX}{k}"


def iter_branching_expansions(
    b: Branch,
    urelems: frozenset[Term] | None = None,
    disabled: frozenset[str] = frozenset(),
) -> Iterator[BranchStep]:
    """Applicable, unsubsumed branching rule instances in priority order.

    ``urelems`` switches on typed mode: the witness rule then skips
    disequalities with an urelement on either side.
    """
    fs, idx, root = b.fset, b.index, b._root
    if "branch.or" not in disabled:
        for f in b.formulas:
            if isinstance(f, Or):
                p = f.left
                if p not in fs and Neg(p) not in fs:
                    yield BranchStep("branch.or", (f,), ((p,), (Neg(p),)))
    if "branch.neg-and" not in disabled:
        for f in b.formulas:
            if isinstance(f, Neg) and isinstance(f.inner, And):
                p = f.inner.left
                if p not in fs and Neg(p) not in fs:
                    yield BranchStep("branch.neg-and", (f,), ((Neg(p),), (p,)))
    if "branch.union" not in disabled:
        for s, t in idx.pos_mem:
            if isinstance(t, Union) and t in root.subterms:
                yes, no = mem(s, t.left), notmem(s, t.left)
                if yes not in fs and no not in fs:
                    yield BranchStep("branch.union", (mem(s, t),), ((yes,), (no,)))
    if "branch.inter" not in disabled:
        for s, t in idx.pos_mem:
            others = [u.right for u in root.by_left[Inter].get(t, ())]
            others += [u.left for u in root.by_right[Inter].get(t, ())]
            for o in others:
                yes, no = mem(s, o), notmem(s, o)
                if yes not in fs and no not in fs:
                    yield BranchStep("branch.inter", (mem(s, t),), ((yes,), (no,)))
    if "branch.diff" not in disabled:
        for s, t in idx.pos_mem:
            for u in root.by_left[Diff].get(t, ()):
                yes, no = mem(s, u.right), notmem(s, u.right)
                if yes not in fs and no not in fs:
                    yield BranchStep("branch.diff", (mem(s, t),), ((yes,), (no,)))
    if "branch.witness" not in disabled:
        x = None
        for t1, t2 in idx.neg_eq:
            if t1 not in root.subterms or t2 not in root.subterms:
                continue
            if urelems is not None and (t1 in urelems or t2 in urelems):
                continue
            if _separated(idx, t1, t2):
                continue
            if x is None:
                x = Var(fresh_witness(b))
            yield BranchStep(
                "branch.witness",
                (neq(t1, t2),),
                ((mem(x, t1), notmem(x, t2)), (notmem(x, t1), mem(x, t2))),
                x.name,
            )


def _separated(idx: _Index, t1: Term, t2: Term) -> bool:
    """Some ``s`` is already known to lie in exactly one of ``t1``, ``t2``."""
    in1, in2 = idx.pos_by_set.get(t1, ()), idx.pos_by_set.get(t2, ())
    out1, out2 = idx.neg_by_set.get(t1, ()), idx.neg_by_set.get(t2, ())
    if in1 and out2 and not set(in1).isdisjoint(out2):
        return True
    if in2 and out1 and not set(in2).isdisjoint(out1):
        return True
    return False


def branching_expansions(
    b: Branch,
    urelems: frozenset[Term] | None = None,
    disabled: frozenset[str] = frozenset(),
) -> list[BranchStep]:
    return list(iter_branching_expansions(b, urelems, disabled))


def is_sat(
    b: Branch,
    urelems: frozenset[Term] | None = None,
    disabled: frozenset[str] = frozenset(),
) -> bool:
    """Saturated: no linear rule makes progress and no branching rule applies."""
    return is_lin_sat(b, disabled) and next(iter_branching_expansions(b, urelems, disabled), None) is None


# -- witnesses --------------------------------------------------------------

def wits(b: Branch) -> frozenset[str]:
    return b.wits


def pwits(b: Branch) -> frozenset[str]:
    """Witnesses never equated with a subterm of the initial formula."""
    sub = b.root_subterms
    tied = set()
    for s, t in b.index.pos_eq:
        if isinstance(s, Var) and t in sub:
            tied.add(s.name)
        if isinstance(t, Var) and s in sub:
            tied.add(t.name)
    return frozenset(c for c in b.wits if c not in tied)


def subterms_prime(b: Branch) -> frozenset[Term]:
    return b.root_subterms | {Var(c) for c in b.wits - pwits(b)}


def apply_linear(b: Branch, step: LinearStep) -> Branch:
    return b.extend(step.conclusions)
