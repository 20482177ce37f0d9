# %% [markdown]
# # Feedback policy against the random-walk baseline
#
# Same seed, same users, same drone speed. The baseline drones wander with no
# coordination; the feedback drones chase the centroid of their users and
# undo moves that lose connections.

# %%
from dataclasses import replace

from dbsim import Policy, SimConfig, average_connectivity, run, trend_slope

base = SimConfig(seed=0)
out = {}
for policy in Policy:
    res = run(replace(base, policy=policy))
    ts = res.m_matrix.mean(axis=1)
    out[policy] = ts
    print(f"{policy.value:10s} M_bar={average_connectivity(res.traces):8.1f}  slope={trend_slope(ts):+.2e}")

# %%
fb, rw = out[Policy.FEEDBACK], out[Policy.RANDOM_WALK]
for t in range(0, base.t_max, 100):
    print(f"t={t:4d}  feedback {fb[t:t + 100].mean():6.2f}   random walk {rw[t:t + 100].mean():6.2f}")

# %% [markdown]
# The same comparison is available from the command line and writes
# ``compare.csv`` plus a one-line verdict:
#
#     dbsim compare --config scenario.ini --out out/compare
