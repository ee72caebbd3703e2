"""Deciding satisfiability and reading off models."""

from mlss import Sat, decide, parse
from mlss.semantics import render_model

problems = [
    "x in {}",                               # nothing is in the empty set
    "x != x",                                # equality is reflexive
    "x in {x}",                              # singleton membership
    "x in y + z & x notin y & x notin z",    # union is exhaustive
    "x <= y & y <= z & x notin z & w in x",  # subset is transitive
    "x = {y} & y = {x}",                     # no cycles of membership
    "x + y = z & z != {}",                   # a non-empty union
]

for src in problems:
    r = decide(parse(src), "untyped")
    if isinstance(r, Sat):
        print(f"SAT    {src}")
        # witnesses (names starting with _) are left out of the display
        shown = {k: v for k, v in r.model.items() if not k.startswith("_")}
        for line in render_model(shown).splitlines():
            # values built from pure witnesses are large; show their start
            print("       " + (line if len(line) < 70 else line[:66] + " ..."))
    else:
        print(f"UNSAT  {src}")
    s = r.stats
    print(f"       {s.rule_applications} rule applications, {s.branches_explored} branches, "
          f"largest branch {s.max_branch_size} of bound {s.bound}")
