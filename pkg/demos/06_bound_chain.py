#%% [markdown]
# How far the bounds are from the numbers
#
# The reduced-state difference estimates carry large constants (2^17, 2^34,
# 2^56). Evaluating both sides at a size that fits in memory shows the slack,
# and the full chain shows which link needs astronomically large delta.

#%%
from xxzring.analysis import (difference_entries_check, droplet_mass_check, eigenvalue_order_check,
                              entropy_difference_check, main_theorem_chain)
from xxzring.config import Interval, ModelParams

#%%
params = ModelParams(14, 4, 50.0)
w = Interval(4, 9, 14)
reports = (difference_entries_check(params, w, 3) + eigenvalue_order_check(params, w, 3, 2.0)
           + entropy_difference_check(params, w, 3, 2.0, 2.0))
for r in reports:
    print(f"{r.check:28s} {r.lhs:10.3e} <= {r.rhs:10.3e}   ratio {r.lhs / r.rhs:.1e}")

#%%
for delta in (10.0, 300.0, 3000.0):
    upper, lower = droplet_mass_check(ModelParams(12, 3, delta))
    print(delta, "lower bound factor", round(lower.details["factor"], 4), "vacuous" if lower.details["vacuous"] else "")

#%%
for r in main_theorem_chain(0.05, 1 / 16, 1e3, 16, N=4, window=(5, 10)):
    print(f"{r.check:36s} {r.lhs:11.4g} vs {r.rhs:11.4g}  {'ok' if r.holds else 'out of reach'}")
