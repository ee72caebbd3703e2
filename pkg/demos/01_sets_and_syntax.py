"""Hereditarily finite sets and the formula language."""

from mlss import hf_from, hf_ordinal, hf_single, hf_universe, parse, pretty, render
from mlss.hf import EMPTY, hf_mem, hf_union
from mlss.semantics import satisfies

# every value is a set of sets, built from the empty set
zero = EMPTY
one = hf_single(zero)             # {0}
two = hf_from([zero, one])        # {0, {0}}
print("0 =", render(zero))
print("1 =", render(one))
print("2 =", render(two), "same as ordinal 2:", two == hf_ordinal(2))

# canonical form: order and duplicates do not matter
print("{1, 0, 0} == {0, 1}:", hf_from([one, zero, zero]) == two)
print("1 in 2:", hf_mem(one, two), " 2 in 1:", hf_mem(two, one))
print("1 + {2} =", render(hf_union(one, hf_single(two))))

# the small universes used by the bounded oracle
for k in range(4):
    print(f"sets of rank <= {k}: {len(hf_universe(k))}")

# formulas: in, notin, =, !=, <= over +, ^, \, {..}, {}
f = parse("x <= y & {x, y} != y & x notin y \\ x")
print("parsed:", pretty(f))
print("round trip ok:", parse(pretty(f)) == f)

# truth under a valuation; unmentioned variables denote 0
M = {"x": one, "y": two}
print("holds under x=1, y=2:", satisfies(M, f))
