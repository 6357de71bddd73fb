"""Topology that follows the seasons, including on lines you just built.

Two stories.  In season_flip the heavy season wants the triangle broken
open while the light season wants it intact, so the optimal plan opens a
line for exactly one season per epoch.  In braess_build the switch-all
variant builds a new line and then opens that same line in the season
where its loop hurts more than its capacity helps; variants that must keep
new lines closed pay more.
"""

from gridplan import SolveParams, Variant, build_milp, decode_plan, solve_milp
from gridplan.cases import load_bundled

EXACT = SolveParams(mip_gap=0.0)


def solved_plan(case, variant):
    model, index = build_milp(case, variant)
    outcome = solve_milp(model, EXACT)
    return decode_plan(case, variant, index, outcome.assignment)


print("season_flip: open a line in one season, keep it in the other")
case = load_bundled("season_flip")
plan = solved_plan(case, Variant.SWITCH_EXISTING)
for s in range(1, case.horizon.n_seasons + 1):
    opened = [line for line, season, _e in plan.open_existing if season == s]
    state = ", ".join(opened) if opened else "none"
    print(f"  season {s}: lines opened: {state}")
static = solved_plan(case, Variant.STATIC)
print(f"  total cost {plan.tc:,.0f} vs {static.tc:,.0f} with no switching")
print()

print("braess_build: build a line, then open it when it backfires")
case = load_bundled("braess_build")
for variant in Variant:
    plan = solved_plan(case, variant)
    builds = ", ".join(f"{j} in epoch {e}" for j, e in plan.builds) or "nothing"
    print(f"  {variant.value}: builds {builds}, total {plan.tc:,.0f}")
    for line, season, epoch in plan.open_new:
        print(f"    opens the new line {line} in season {season}, epoch {epoch}")
