"""Run a small seed ensemble and look at pair creation and annihilation."""

from fractions import Fraction

from tasepburgers.ensemble import run_ensemble

agg, members = run_ensemble(L=32, T=40, n_runs=50, seed=0)
for key in ("pass_rate", "creations", "annihilations", "active_site_steps",
            "creation_rate", "creation_rate_z", "non_entropic_edges"):
    print(f"{key:>18}: {agg[key]}")

# mass is the number of right movers minus left movers, fixed per run
masses = sorted({Fraction(m["mass"]) for m in members})
print("masses seen:", [str(m) for m in masses])
