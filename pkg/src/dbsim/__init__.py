"""Drone base stations chasing mobile users.

A discrete-time simulator of drones that reposition themselves to serve as
many random-walking ground users as possible, using a centroid-seeking move
with revert-on-loss feedback, alongside a random-walk baseline.

Modules
-------
model
    Geometry, configuration and the seeded PCG64 stream.
association
    Nearest-drone association within the coverage radius (dense and grid).
policies
    Pair separation, centroid/destination planning, feedback check, baseline.
mobility
    Reflecting random walk of the users.
engine
    The per-tick loop and run driver.
metrics
    Average connectivity, per-drone statistics and trend slopes.
cli
    ``run`` / ``sweep`` / ``compare`` experiments writing CSV artifacts.
"""

from .association import Assignment, associate, associate_grid
from .engine import RunResult, TickTrace, World, run, tick
from .metrics import average_connectivity, drone_stats, summarize, trend_slope
from .model import (
    DroneState,
    GroundNode,
    Point2D,
    Policy,
    Region,
    RngStream,
    SimConfig,
    ValidationError,
    init_world,
)

__version__ = "0.1.0"
