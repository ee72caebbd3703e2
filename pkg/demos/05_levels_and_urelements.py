"""Levels, urelements and the typed mode."""

from mlss import Untypeable, decide, infer, parse
from mlss.semantics import render_model

for src in ["x in y", "x + y = z", "x = {} & {x} = {}", "x in y & y in z & w = x", "x in y & y in x"]:
    try:
        ty = infer(parse(src))
    except Untypeable as e:
        print(f"{src:28s} ill-typed ({e})")
        continue
    levels = ", ".join(f"{x}:{l}" for x, l in sorted(ty.env.vars.items()))
    urs = sorted(t.name for t in ty.urelems) or ["none"]
    print(f"{src:28s} levels {levels}; urelements {', '.join(urs)}")

# urelements are never split by the witness rule; distinct ones get distinct values
r = decide(parse("x != y & y != z"), "typed")
print(render_model(r.model))
print("rule applications typed:", r.stats.rule_applications,
      " untyped:", decide(parse("x != y & y != z"), "untyped").stats.rule_applications)
