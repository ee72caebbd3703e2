"""How a model is read off an open saturated branch."""

from mlss import parse, pretty, render
from mlss.solver import build_bgraph, extract_model, realise, saturate_open
from mlss.syntax import Var
from mlss.tableau import pwits

r = saturate_open(parse("x != y & y != z"))
b = r.branch
print("branch:")
for f in b.formulas:
    print("  ", pretty(f))

# pure witnesses are fresh variables never equated with input terms;
# each one gets its own large value so they are pairwise distinct
g = build_bgraph(b)
print("vertices:", len(g.verts), " pure witnesses:", sorted(pwits(b)))
for w in sorted(pwits(b)):
    print(f"  {w} has one element of cardinality {len(next(iter(realise(b, Var(w)))))}")

# every other vertex is the set of the values of its parents in the graph
M = extract_model(b)
for x in "xyz":
    print(f"  {x} has {len(M[x])} element(s)")
print("x, y, z pairwise distinct:", len({M['x'], M['y'], M['z']}) == 3)

# a tiny case where the values are readable
M = extract_model(saturate_open(parse("x in y & y in z")).branch)
print({k: render(v) for k, v in M.items()})
