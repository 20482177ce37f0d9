# %% [markdown]
# # Average connectivity against the number of drones
#
# A small version of the sweep: three seeds per drone count. With the default
# geometry the coverage discs rarely meet, so total connectivity grows almost
# exactly linearly with the fleet size.

# %%
import numpy as np

from dbsim import SimConfig, average_connectivity, run

counts = [5, 10, 15, 20]
seeds = [0, 1, 2]
rows = []
for n in counts:
    for policy in ("feedback", "randomwalk"):
        vals = [average_connectivity(run(SimConfig(n_d=n, seed=s, policy=policy)).traces) for s in seeds]
        rows.append((n, policy, np.mean(vals), np.min(vals), np.max(vals)))
        print(f"n_D={n:2d} {policy:10s} mean {np.mean(vals):7.1f}  [{np.min(vals):.1f}, {np.max(vals):.1f}]")

# %%
fb = np.array([r[2] for r in rows if r[1] == "feedback"])
slope, icpt = np.polyfit(counts, fb, 1)
print(f"feedback: M_bar ~ {slope:.1f} * n_D + {icpt:.1f}")

# %% [markdown]
# The CLI equivalent (ten seeds by default) writes ``sweep.csv`` and
# ``aggregate.csv``:
#
#     dbsim sweep --config scenario.ini --drones 5,10,15,20 --seeds 10 --out out/sweep
