"""Drone mobility decisions.

The feedback policy steers a drone toward a point diagonally offset from the
centroid of the users it serves, and undoes a move when its connection count
drops (see :func:`feedback_check`). Overlap is limited by pushing close pairs
of drones apart. The random-walk policy is the uncoordinated baseline.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import DroneState, Point2D, Region, RngStream

__all__ = [
    "DegenerateCoincidence",
    "NoConnections",
    "Action",
    "Verdict",
    "PolicyDecision",
    "separate_pair",
    "separate_all",
    "compute_centroid",
    "compute_destination",
    "feedback_plan",
    "feedback_check",
    "update_personal_best",
    "move_toward",
    "random_walk_policy",
]

COINCIDENCE_EPS = 1e-9
PERTURBATION = 1e-3


class DegenerateCoincidence(ValueError):
    """Two drones sit on the same spot, so no separation direction exists."""


class NoConnections(ValueError):
    """A centroid was requested for a drone serving nobody."""


class Action(enum.Enum):
    MOVE_TOWARD_DEST = "move"
    REVERT = "revert"
    HOLD = "hold"


class Verdict(enum.Enum):
    KEEP = "keep"
    REVERT = "revert"


@dataclass(frozen=True)
class PolicyDecision:
    new_dest: Point2D | None
    action: Action = Action.MOVE_TOWARD_DEST


def separate_pair(pos_i: Point2D, pos_j: Point2D, radius_overlap: float):
    """Push two drones apart so both sit ``radius_overlap / 2`` from their midpoint."""
    d = math.hypot(pos_j.x - pos_i.x, pos_j.y - pos_i.y)
    if d < COINCIDENCE_EPS:
        raise DegenerateCoincidence(
            f"drones at ({pos_i.x}, {pos_i.y}) and ({pos_j.x}, {pos_j.y}) coincide"
        )
    cx = (pos_i.x + pos_j.x) / 2
    cy = (pos_i.y + pos_j.y) / 2
    half = radius_overlap / 2

    def push(p):
        r = math.hypot(p.x - cx, p.y - cy)
        return Point2D(cx + (p.x - cx) / r * half, cy + (p.y - cy) / r * half)

    return push(pos_i), push(pos_j)


def separate_all(drones, radius_overlap: float, region: Region, rng: RngStream) -> int:
    """One pass over pairs ``(i, j)``, ``i < j``, in lexicographic order.

    Pairs closer than ``radius_overlap`` are separated and clamped to the
    region. A coincident pair first has drone ``j`` nudged by 1 mm in a
    random direction. Later pairs may undo earlier ones; the next pass
    (next tick) picks that up. Returns the number of pairs adjusted.
    """
    ro2 = radius_overlap * radius_overlap
    adjusted = 0
    n = len(drones)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = drones[i], drones[j]
            if a.pos.dist2(b.pos) >= ro2:
                continue
            pj = b.pos
            if a.pos.dist(pj) < COINCIDENCE_EPS:
                theta = rng.angle()
                pj = Point2D(pj.x + PERTURBATION * math.cos(theta),
                             pj.y + PERTURBATION * math.sin(theta))
            new_i, new_j = separate_pair(a.pos, pj, radius_overlap)
            a.pos = region.clamp(new_i)
            b.pos = region.clamp(new_j)
            adjusted += 1
    return adjusted


def compute_centroid(members) -> Point2D:
    """Arithmetic mean of member positions (correctly rounded sums)."""
    pts = np.asarray(
        [(p.x, p.y) for p in members] if not isinstance(members, np.ndarray) else members,
        dtype=np.float64,
    ).reshape(-1, 2)
    m = len(pts)
    if m == 0:
        raise NoConnections("centroid of an empty member set is undefined")
    xs, ys = pts[:, 0], pts[:, 1]
    # rounding of sum/m can step one ulp past the members' bounding box
    x = min(max(math.fsum(xs) / m, xs.min()), xs.max())
    y = min(max(math.fsum(ys) / m, ys.min()), ys.max())
    return Point2D(float(x), float(y))


def compute_destination(centroid: Point2D, radius_r: float, p: int) -> Point2D:
    """Offset the centroid by ``(-1)**p * R/2`` on both axes (one shared ``p``)."""
    if p not in (0, 1):
        raise ValueError(f"p must be 0 or 1, got {p!r}")
    off = radius_r / 2 if p == 0 else -(radius_r / 2)
    return Point2D(centroid.x + off, centroid.y + off)


def random_walk_policy(drone: DroneState, step: float, region: Region, rng: RngStream) -> PolicyDecision:
    """Pick a destination ``step`` away along a uniform random heading, clamped."""
    theta = rng.angle()
    dest = Point2D(drone.pos.x + step * math.cos(theta), drone.pos.y + step * math.sin(theta))
    return PolicyDecision(region.clamp(dest))


def feedback_plan(
    drone: DroneState,
    members,
    radius_r: float,
    rng: RngStream,
    *,
    drone_step: float,
    region: Region,
) -> PolicyDecision:
    """Plan the next destination of a drone under the feedback policy.

    With no connected users the centroid is undefined and the drone explores
    with a single random-walk step instead.
    """
    if len(members) == 0:
        return random_walk_policy(drone, drone_step, region, rng)
    p = rng.bit()
    return PolicyDecision(compute_destination(compute_centroid(members), radius_r, p))


def feedback_check(m_current: int, m_prev: int, phi: int, loss: int) -> Verdict:
    """Decide whether the last move should be undone.

    Above the threshold any drop reverts; at or below it only a drop of more
    than ``loss`` connections does.
    """
    if m_prev > phi:
        return Verdict.REVERT if m_current < m_prev else Verdict.KEEP
    return Verdict.REVERT if m_current < m_prev - loss else Verdict.KEEP


def update_personal_best(m_max: int, m_current: int, phi: int) -> int:
    return max(m_max, m_current, phi)


def move_toward(pos: Point2D, dest: Point2D, step: float, region: Region) -> Point2D:
    """Advance at most ``step`` along the straight line to ``dest``."""
    dx = dest.x - pos.x
    dy = dest.y - pos.y
    d = math.hypot(dx, dy)
    if d <= step:
        return region.clamp(dest)
    k = step / d
    return region.clamp(Point2D(pos.x + dx * k, pos.y + dy * k))
