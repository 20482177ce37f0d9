# %% [markdown]
# # Geometry primitives
#
# The feedback policy is built from four small pieces: pushing close drones
# apart, the centroid of the users a drone serves, the diagonal destination
# offset from that centroid, and the revert rule.

# %%
import math

from dbsim.model import Point2D, Region
from dbsim.policies import (
    compute_centroid,
    compute_destination,
    feedback_check,
    move_toward,
    separate_pair,
)

# %% [markdown]
# Two drones 5 m apart with a 10 m overlap radius end up exactly 10 m apart,
# on the line through both, symmetric about their midpoint.

# %%
a, b = separate_pair(Point2D(0, 0), Point2D(3, 4), 10.0)
print(a, b, a.dist(b))

# %% [markdown]
# Centroid and destination. The same sign is applied to both axes, so the
# destination always sits R/sqrt(2) from the centroid along the main diagonal.

# %%
c = compute_centroid([Point2D(0, 0), Point2D(4, 0), Point2D(2, 6)])
for p in (0, 1):
    d = compute_destination(c, 30.0, p)
    print(p, d, round(d.dist(c), 6), round(30 / math.sqrt(2), 6))

# %% [markdown]
# Drones move at most one step per tick toward the destination.

# %%
pos = Point2D(0, 0)
for _ in range(3):
    pos = move_toward(pos, Point2D(3, 4), 2.0, Region(100.0))
    print(pos)

# %% [markdown]
# The revert rule with threshold 25 and loss 5: above the threshold any drop
# reverts, below it only a drop of more than 5 does.

# %%
for m_prev, m in [(30, 28), (30, 31), (10, 4), (10, 6)]:
    print(m_prev, "->", m, feedback_check(m, m_prev, 25, 5).value)
