# %% [markdown]
# Bandit feedback: value queries on a shrunk region
#
# With only function values available, the learner explores at
# ``x + delta * u`` for a random unit vector ``u``.  To keep those points
# feasible it optimizes over a shrunk copy of the region.

# %%
import numpy as np

from drsubmax import BlockSchedule, OracleSpec, bandit_frank_wolfe, ftpl_factory, schedule, shrink
from drsubmax.geometry import membership
from drsubmax.objectives import generate_quadratic, generate_region, metadata

rng = np.random.default_rng(3)
region = generate_region(4, 3, rng)
print(f"Chebyshev radius r = {region.radius:.3f}")

sched = schedule("bandit", "value", 1000)
print(sched)

# %%
# The default schedule picks delta = T^(-1/6), which can exceed r on small
# regions; the block structure is kept and delta is capped below r.
delta = min(sched.delta, 0.8 * region.radius)
sched = BlockSchedule(T=sched.T, L=sched.L, K=sched.K, delta=delta,
                      feedback=sched.feedback, oracle=sched.oracle)
small = shrink(region, delta)

objectives = [generate_quadratic(4, rng) for _ in range(sched.T)]
B0 = max(metadata(f).M0 for f in objectives) + 0.1
spec = OracleSpec(kind="value", noise_scale=0.1, delta=delta, B0=B0)
trace = bandit_frank_wolfe("B", sched, region, ftpl_factory(0.01), spec, objectives,
                           np.random.default_rng(0))

# %%
explored = trace.actions[trace.explore]
print("exploration rounds:", int(trace.explore.sum()), "of", sched.T)
print("all actions feasible:", all(membership(region, y, 1e-9) for y in trace.actions))
print("exploration points outside the shrunk region:",
      sum(not membership(small, y, 1e-9) for y in explored))
print("queries:", trace.total_queries)
