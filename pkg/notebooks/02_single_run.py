# %% [markdown]
# # A single run
#
# Fifteen drones, ten thousand users, a thousand ticks. Per-drone connection
# counts over time, then the min / mean / max / final summary per drone.

# %%
import numpy as np

from dbsim import SimConfig, drone_stats, run, summarize

config = SimConfig(seed=0)
result = run(config)
summary = summarize(result.traces)
print("average connectivity (sum over drones, mean over ticks):", summary.avg_connectivity)
print("trend slope of mean M per tick:", summary.trend_slope)

# %%
ts = summary.mean_m_timeseries
for t in range(0, config.t_max, 100):
    print(f"t={t:4d}  mean M over next 100 ticks = {ts[t:t + 100].mean():.2f}")

# %%
for s in drone_stats(result.traces):
    print(f"drone {s.drone_id:2d}: min {s.min_m:3d}  mean {s.mean_m:6.2f}  max {s.max_m:3d}  final {s.final_m:3d}")

# %%
reverts = np.array([len(tr.reverts) for tr in result.traces])
print("reverts per tick: mean", reverts.mean(), "max", reverts.max())

# %% [markdown]
# With matplotlib installed the per-drone curves can be drawn directly from
# ``result.m_matrix``:

# %%
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(result.m_matrix, lw=0.5)
    ax.plot(ts, "k", lw=2, label="mean")
    ax.axhline(config.phi, ls="--", c="grey", label="threshold")
    ax.set_xlabel("tick")
    ax.set_ylabel("connected users M")
    ax.legend()
    fig.savefig("single_run.png", dpi=120)
