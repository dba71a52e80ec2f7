# %% [markdown]
# Offline Frank-Wolfe in the four problem cases
#
# Each case pairs an objective family with a region shape.  We run K steps
# of offline Frank-Wolfe on a small instance and compare against a grid
# search for the true maximum.

# %%

import numpy as np

from drsubmax import FeasibleRegion, approx_ratio, offline_frank_wolfe
from drsubmax.geometry import min_inf_norm_point
from drsubmax.objectives import generate_monotone_quadratic, generate_quadratic, value
from drsubmax.verify import grid_max

rng = np.random.default_rng(0)
packing = FeasibleRegion(rng.uniform(size=(2, 2)), np.ones(2), downward_closed=True)
# sum(x) >= 0.6 cuts off the origin, so only cases C and D apply
shifted = FeasibleRegion(np.vstack([packing.A, [[-1.0, -1.0]]]), [1.0, 1.0, -0.6])

# %%
monotone, general = generate_monotone_quadratic(2, rng), generate_quadratic(2, rng)
instances = {"A": (monotone, packing), "B": (general, packing),
             "C": (monotone, shifted), "D": (general, shifted)}

for case, (f, region) in instances.items():
    x = offline_frank_wolfe(case, f, region, K=100)
    _, opt = grid_max(f, region, 0.01)
    h = min_inf_norm_point(region)[1]
    print(f"case {case}: F(x) = {value(f, x):7.3f}   grid max {opt:7.3f}   "
          f"alpha = {approx_ratio(case, h):.3f}")

# %% [markdown]
# The guarantees are only a fraction of the optimum, but on these small
# instances Frank-Wolfe usually gets much closer.  The iterates of case B
# stay away from the upper faces of the box, which keeps the
# ``(1 - x)``-weighted steps productive:

# %%
x, iterates = offline_frank_wolfe("B", general, packing, 20, return_iterates=True)
slack = 1 - iterates.max(axis=1)
print(np.round(slack, 3))
print("geometric floor:", np.round((1 - 1 / 20) ** np.arange(21), 3))
