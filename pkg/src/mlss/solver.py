"""The MLSS decision procedure, model extraction and proof recording.

``decide_branch`` saturates a branch with linear rules, closing it as soon
as a closedness condition appears, and splits on the first applicable
branching rule.  Closed subtrees are returned as certificate nodes; an open
saturated branch yields a model through ``realise``.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .certificate import Certificate, CertLeaf, CertNode
from .hf import EMPTY, HFSet, hf_from, hf_inter, hf_ordinal, hf_single, hf_union, hf_diff, hf_mem
from .levels import Typing, annotate, infer, level_of
from .semantics import interp_term, satisfies
from .syntax import (
    Diff, Empty, Formula, Inter, Mem, Single, Term, Union, Var, sort_key, sorted_canonical,
)
from .tableau import (
    Branch, CloseReason, LinearStep, branch_bound, closed_by_new, is_closed,
    iter_branching_expansions, iter_linear_expansions, pwits, subterms_prime,
)

DEFAULT_STEP_BUDGET = 1_000_000


class InternalError(RuntimeError):
    """A runtime invariant of the procedure failed."""


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class Stats:
    branches_explored: int = 0
    rule_applications: int = 0
    max_branch_size: int = 0
    bound: int = 0

    def as_dict(self) -> dict:
        return {
            "branches_explored": self.branches_explored,
            "rule_applications": self.rule_applications,
            "max_branch_size": self.max_branch_size,
            "bound": self.bound,
        }


@dataclass
class Context:
    """Mode and bookkeeping for one run of the procedure."""

    typing: Typing | None = None
    disabled: frozenset[str] = frozenset()
    budget: int = DEFAULT_STEP_BUDGET
    debug_invariants: bool = False
    # called as on_step(branch_before, step, branch_after, witness_levels)
    on_step: Callable | None = None
    stats: Stats = field(default_factory=Stats)
    bound: int = 0

    @property
    def urelems(self) -> frozenset[Term] | None:
        return None if self.typing is None else self.typing.urelems


@dataclass
class Closed:
    node: CertNode | CertLeaf


@dataclass
class OpenSaturated:
    branch: Branch
    witness_levels: dict[str, int]


@dataclass
class Unsat:
    certificate: Certificate
    stats: Stats


@dataclass
class Sat:
    model: dict[str, HFSet]
    witness_branch: Branch
    stats: Stats


# -- search -----------------------------------------------------------------

def decide_branch(b: Branch, ctx: Context, witness_levels: Mapping[str, int] | None = None) -> Closed | OpenSaturated:
    """Run the procedure on ``b``; ``witness_levels`` records typed witness levels on this path."""
    if not ctx.bound:
        ctx.bound = branch_bound(b.phi)
        ctx.stats.bound = ctx.bound
    limit = sys.getrecursionlimit()
    if limit < 20000:
        sys.setrecursionlimit(20000)
    try:
        return _run(b, ctx, dict(witness_levels or {}), is_closed(b))
    finally:
        sys.setrecursionlimit(limit)


def _note(ctx: Context, before: Branch, step, after: Branch, wl: dict) -> None:
    st = ctx.stats
    st.rule_applications += 1
    st.max_branch_size = max(st.max_branch_size, len(after))
    if len(after) > ctx.bound:
        raise InternalError(f"branch size {len(after)} exceeds the bound {ctx.bound}")
    if st.rule_applications > ctx.budget:
        raise BudgetExceeded(f"step budget of {ctx.budget} rule applications exhausted")
    if ctx.debug_invariants:
        _check_invariants(after, ctx, wl)
    if ctx.on_step is not None:
        ctx.on_step(before, step, after, wl)


def _run(b: Branch, ctx: Context, wl: dict, reason: CloseReason | None) -> Closed | OpenSaturated:
    ctx.stats.branches_explored += 1
    ctx.stats.max_branch_size = max(ctx.stats.max_branch_size, len(b))
    linear: list[tuple[LinearStep, tuple[Formula, ...]]] = []
    while reason is None:
        step = next(iter_linear_expansions(b, ctx.disabled), None)
        if step is None:
            break
        new = b.new_formulas(step.conclusions)
        after = b.extend(new)
        _note(ctx, b, step, after, wl)
        linear.append((step, tuple(new)))
        b = after
        reason = closed_by_new(b, new)
    if reason is not None:
        node: CertNode | CertLeaf = CertLeaf(reason.kind, reason.formulas)
    else:
        bstep = next(iter_branching_expansions(b, ctx.urelems, ctx.disabled), None)
        if bstep is None:
            return OpenSaturated(b, wl)
        child_wl = dict(wl)
        if bstep.fresh_witness is not None and ctx.typing is not None:
            t1 = bstep.premises[0].inner.atom.left
            lvl = _term_level(ctx, t1, wl)
            child_wl[bstep.fresh_witness] = lvl - 1
        children = []
        for alt in bstep.alternatives:
            new = b.new_formulas(alt)
            after = b.extend(new)
            _note(ctx, b, bstep, after, child_wl)
            res = _run(after, ctx, child_wl, closed_by_new(after, new))
            if isinstance(res, OpenSaturated):
                return res
            children.append(res.node)
        node = CertNode(bstep.rule, bstep.premises, (), tuple(children), bstep.alternatives, bstep.fresh_witness)
    for step, new in reversed(linear):
        node = CertNode(step.rule, step.premises, new, (node,))
    return Closed(node)


def _term_level(ctx: Context, t: Term, wl: Mapping[str, int]) -> int:
    levels = dict(ctx.typing.env.vars)
    levels.update(wl)
    lvl = level_of(t, levels)
    if lvl is None:
        raise InternalError(f"term without a level in typed mode: {t}")
    return lvl


def _check_invariants(b: Branch, ctx: Context, wl: Mapping[str, int]) -> None:
    allowed = b.root_subterms | {Var(w) for w in b.wits}
    from .syntax import subterms
    extra = set(subterms(list(b.formulas))) - allowed
    if extra:
        raise InternalError(f"subterm closure violated by {sorted_canonical(extra)[0]}")
    if ctx.typing is not None:
        from .levels import literal_typed
        levels = dict(ctx.typing.env.vars)
        levels.update(wl)
        for f in b.formulas:
            if not literal_typed(f, levels):
                raise InternalError("typed branch lost its typing")


# -- entry point ------------------------------------------------------------

def prepare(f: Formula, mode: str = "typed") -> tuple[Formula, Typing | None]:
    """The formula actually solved, and its typing in typed mode.

    Typed mode pins every unannotated ``{}`` to its inferred level.
    Raises :class:`Untypeable`.
    """
    if mode not in ("typed", "untyped"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "untyped":
        return f, None
    ty = infer(f)
    return annotate(f, ty.env), ty


def decide(
    f: Formula,
    mode: str = "typed",
    *,
    budget: int = DEFAULT_STEP_BUDGET,
    debug_invariants: bool = False,
    on_step: Callable | None = None,
) -> Sat | Unsat:
    """Decide satisfiability of ``f``.

    Raises :class:`Untypeable` in typed mode for ill-typed input,
    :class:`BudgetExceeded` when the step budget runs out and
    :class:`InternalError` when a runtime self-check fails.
    """
    g, ty = prepare(f, mode)
    ctx = Context(typing=ty, budget=budget,
                  debug_invariants=debug_invariants, on_step=on_step)
    res = decide_branch(Branch.initial(g), ctx)
    if isinstance(res, Closed):
        return Unsat(Certificate(g, mode, res.node), ctx.stats)
    M = extract_model(res.branch, ty, res.witness_levels)
    if not satisfies(M, f):
        raise InternalError("extracted model does not satisfy the input formula")
    return Sat(M, res.branch, ctx.stats)


def saturate_open(f: Formula, mode: str = "untyped", disabled: frozenset[str] = frozenset()) -> OpenSaturated | Closed:
    """Run the search and return its raw outcome."""
    g, ty = prepare(f, mode)
    return decide_branch(Branch.initial(g), Context(typing=ty, disabled=frozenset(disabled)))


# -- model extraction -------------------------------------------------------

@dataclass
class BranchGraph:
    verts: frozenset[Term]
    arcs: frozenset[tuple[Term, Term]]
    parents: dict[Term, list[Term]]


def build_bgraph(b: Branch) -> BranchGraph:
    verts = frozenset({Var(c) for c in pwits(b)} | subterms_prime(b))
    arcs = frozenset((s, t) for s, t in b.index.pos_mem if s in verts and t in verts)
    parents: dict[Term, list[Term]] = {v: [] for v in verts}
    for s, t in arcs:
        parents[t].append(s)
    g = BranchGraph(verts, arcs, parents)
    if _has_cycle(g):
        raise InternalError("branch graph of an open branch has a cycle")
    return g


def _has_cycle(g: BranchGraph) -> bool:
    state: dict[Term, int] = {}
    for v in g.verts:
        if v in state:
            continue
        stack = [(v, iter(g.parents[v]))]
        state[v] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state.get(nxt) == 1:
                return True
            elif nxt not in state:
                state[nxt] = 1
                stack.append((nxt, iter(g.parents[nxt])))
    return False


class Realiser:
    """``realise`` for one open saturated branch."""

    def __init__(self, b: Branch, typing: Typing | None = None, witness_levels: Mapping[str, int] | None = None):
        self.b = b
        self.g = build_bgraph(b)
        self.pw = sorted(pwits(b), key=lambda c: sort_key(Var(c)))
        self.sub = subterms_prime(b)
        n = len(self.g.verts)
        self.pure = {c: hf_single(hf_ordinal(n + 1 + k)) for k, c in enumerate(self.pw)}
        self.urelem_value: dict[Term, HFSet] = {}
        if typing is not None:
            self._urelem_classes(typing, witness_levels or {}, n)
        self.memo: dict[Term, HFSet] = {}

    def _urelem_classes(self, typing: Typing, wl: Mapping[str, int], n: int) -> None:
        levels = dict(typing.env.vars)
        levels.update(wl)
        ur = [t for t in sorted_canonical(self.sub) if isinstance(t, Var) and levels.get(t.name) == 0]
        parent = {t: t for t in ur}

        def find(t):
            while parent[t] != t:
                parent[t] = parent[parent[t]]
                t = parent[t]
            return t

        for s, t in self.b.index.pos_eq:
            if s in parent and t in parent:
                rs, rt = find(s), find(t)
                if rs != rt:
                    if sort_key(rt) < sort_key(rs):
                        rs, rt = rt, rs
                    parent[rt] = rs
        reps = sorted_canonical({find(t) for t in ur})
        base = n + 1 + len(self.pw)
        # the first class takes 0 so the simplest models read naturally
        value = {r: (EMPTY if i == 0 else hf_single(hf_ordinal(base + i))) for i, r in enumerate(reps)}
        for t in ur:
            self.urelem_value[t] = value[find(t)]

    def __call__(self, t: Term) -> HFSet:
        hit = self.memo.get(t)
        if hit is not None:
            return hit
        if isinstance(t, Var) and t.name in self.pure:
            out = self.pure[t.name]
        elif t in self.sub:
            if t in self.urelem_value:
                out = self.urelem_value[t]
            else:
                out = hf_from(self(p) for p in self.g.parents.get(t, ()))
        else:
            out = EMPTY
        self.memo[t] = out
        return out


def realise(b: Branch, t: Term, typing: Typing | None = None, witness_levels=None) -> HFSet:
    return Realiser(b, typing, witness_levels)(t)


def extract_model(b: Branch, typing: Typing | None = None, witness_levels=None) -> dict[str, HFSet]:
    """Valuation read off an open saturated branch, with its self-checks."""
    r = Realiser(b, typing, witness_levels)
    M = {x: r(Var(x)) for x in sorted(b.vars)}
    # every branch literal holds under the realisation
    for f, lit in b.index.literals:
        s, t = lit.atom.sides
        rs, rt = r(s), r(t)
        holds = hf_mem(rs, rt) if isinstance(lit.atom, Mem) else rs == rt
        if holds != lit.positive:
            raise InternalError(f"realisation violates a branch literal: {f}")
    # compound subterms are realised homomorphically
    for t in r.sub:
        if isinstance(t, Empty):
            ok = r(t) == EMPTY
        elif isinstance(t, Single):
            ok = r(t) == hf_single(r(t.inner))
        elif isinstance(t, Union):
            ok = r(t) == hf_union(r(t.left), r(t.right))
        elif isinstance(t, Inter):
            ok = r(t) == hf_inter(r(t.left), r(t.right))
        elif isinstance(t, Diff):
            ok = r(t) == hf_diff(r(t.left), r(t.right))
        else:
            ok = True
        if not ok:
            raise InternalError(f"realisation is not compositional at {t}")
    for t in r.sub:
        if interp_term(M, t) != r(t):
            raise InternalError(f"model disagrees with realise at {t}")
    for f in b.formulas:
        if not satisfies(M, f):
            raise InternalError(f"coherence check failed on {f}")
    return M
