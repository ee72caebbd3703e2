"""Driving the tableau one rule at a time."""

from mlss import parse, pretty
from mlss.syntax import And, Neg, Var, mem
from mlss.tableau import Branch, branching_expansions, is_closed, is_sat, linear_expansions

# a branch starts from the initial formula and only grows
b = Branch.initial(parse("x in y + z & x notin y & (x notin z | y = z)"))
while not is_closed(b):
    steps = linear_expansions(b)
    if not steps:
        break
    step = steps[0]
    print(f"{step.rule:20s} adds {', '.join(pretty(c) for c in step.conclusions)}")
    b = b.extend(step.conclusions)

# no linear rule is left; branching rules split the branch in two
for s in branching_expansions(b):
    print(f"{s.rule:20s} splits on", " | ".join(", ".join(map(pretty, alt)) for alt in s.alternatives))

# without double negation elimination the calculus is incomplete:
# the branch below is open and saturated although the formula is UNSAT
p = mem(Var("x"), Var("y"))
nnn = Neg(Neg(Neg(p)))
stuck = Branch([And(nnn, p), nnn, p])
print("open:", is_closed(stuck) is None,
      " saturated without neg-neg:", is_sat(stuck, disabled=frozenset({"prop.neg-neg"})),
      " saturated with it:", is_sat(stuck))
