"""Nearest-drone association gated by the coverage radius.

A user is served by its nearest drone (lowest id on exact ties) provided the
distance is at most ``radius_r``; otherwise it is unserved. Distances are
compared squared, as ``dx*dx + dy*dy``, in both code paths so that they
agree bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import DroneState, GroundNode, Point2D

__all__ = ["Assignment", "associate", "associate_grid", "as_xy"]

UNASSIGNED = -1


def as_xy(items) -> np.ndarray:
    """Coerce users or drones to an ``(n, 2)`` float64 array."""
    if isinstance(items, np.ndarray):
        return np.asarray(items, dtype=np.float64).reshape(-1, 2)
    rows = []
    for it in items:
        if isinstance(it, (GroundNode, DroneState)):
            it = it.pos
        if isinstance(it, Point2D):
            rows.append((it.x, it.y))
        else:
            rows.append(tuple(it))
    return np.array(rows, dtype=np.float64).reshape(-1, 2)


@dataclass
class Assignment:
    """Result of an association pass.

    ``node_to_drone[g]`` is the serving drone id, or -1 if ``g`` is unserved.
    """

    node_to_drone: np.ndarray
    per_drone_count: np.ndarray

    @classmethod
    def from_labels(cls, labels: np.ndarray, n_drones: int) -> Assignment:
        labels = np.asarray(labels, dtype=np.int64)
        served = labels[labels >= 0]
        counts = np.bincount(served, minlength=n_drones).astype(np.int64)
        return cls(labels, counts)

    @property
    def per_drone_members(self) -> list[set[int]]:
        out = [set() for _ in range(len(self.per_drone_count))]
        for g, d in enumerate(self.node_to_drone.tolist()):
            if d >= 0:
                out[d].add(g)
        return out

    def members(self, drone_id: int) -> np.ndarray:
        """Sorted node ids served by ``drone_id``."""
        return np.flatnonzero(self.node_to_drone == drone_id)

    @property
    def total(self) -> int:
        return int(self.per_drone_count.sum())

    def __eq__(self, other):
        if not isinstance(other, Assignment):
            return NotImplemented
        return np.array_equal(self.node_to_drone, other.node_to_drone) and np.array_equal(
            self.per_drone_count, other.per_drone_count
        )


def associate(nodes, drones, radius_r: float) -> Assignment:
    """Dense O(n_g * n_d) association."""
    pts = as_xy(nodes)
    dpos = as_xy(drones)
    n_g, n_d = len(pts), len(dpos)
    if n_d == 0 or n_g == 0:
        return Assignment.from_labels(np.full(n_g, UNASSIGNED), n_d)
    dx = pts[:, 0, None] - dpos[None, :, 0]
    dy = pts[:, 1, None] - dpos[None, :, 1]
    d2 = dx * dx + dy * dy
    best = np.argmin(d2, axis=1)
    best_d2 = d2[np.arange(n_g), best]
    labels = np.where(best_d2 <= radius_r * radius_r, best, UNASSIGNED)
    return Assignment.from_labels(labels, n_d)


def associate_grid(nodes, drones, radius_r: float, cell_size: float | None = None) -> Assignment:
    """Association using a uniform grid over the users.

    Each drone only examines users in the cells overlapping its coverage
    square, padded by one cell against rounding in the cell index. Drones
    are visited in id order and a user switches drone only on a strictly
    smaller distance, which reproduces the lowest-id tie rule.
    """
    if cell_size is None:
        cell_size = radius_r
    if not cell_size > 0:
        raise ValueError(f"cell_size must be positive, got {cell_size}")
    pts = as_xy(nodes)
    dpos = as_xy(drones)
    n_g, n_d = len(pts), len(dpos)
    labels = np.full(n_g, UNASSIGNED, dtype=np.int64)
    if n_d == 0 or n_g == 0:
        return Assignment.from_labels(labels, n_d)

    xs = pts[:, 0]
    ys = pts[:, 1]
    # per-column reductions; min(axis=0) on the (n, 2) array is far slower
    x0 = xs.min()
    y0 = ys.min()
    cx = np.floor((xs - x0) / cell_size).astype(np.int64)
    cy = np.floor((ys - y0) / cell_size).astype(np.int64)
    nx = int(cx.max()) + 1
    ny = int(cy.max()) + 1
    flat = cx * ny + cy
    if nx * ny < 2 ** 16:
        flat = flat.astype(np.uint16)  # radix sort path
    order = np.argsort(flat, kind="stable")
    starts = np.searchsorted(flat[order], np.arange(nx * ny + 1))

    r2 = radius_r * radius_r
    best_d2 = np.full(n_g, np.inf)
    for i, (px, py) in enumerate(dpos):
        ix_lo = max(int(math.floor((px - radius_r - x0) / cell_size)) - 1, 0)
        ix_hi = min(int(math.floor((px + radius_r - x0) / cell_size)) + 1, nx - 1)
        iy_lo = max(int(math.floor((py - radius_r - y0) / cell_size)) - 1, 0)
        iy_hi = min(int(math.floor((py + radius_r - y0) / cell_size)) + 1, ny - 1)
        if ix_lo > ix_hi or iy_lo > iy_hi:
            continue
        # cells of one grid column are contiguous in the sorted order
        chunks = [
            order[starts[ix * ny + iy_lo]: starts[ix * ny + iy_hi + 1]]
            for ix in range(ix_lo, ix_hi + 1)
        ]
        cand = np.concatenate(chunks)
        if cand.size == 0:
            continue
        dx = xs[cand] - px
        dy = ys[cand] - py
        d2 = dx * dx + dy * dy
        take = (d2 <= r2) & (d2 < best_d2[cand])
        hit = cand[take]
        best_d2[hit] = d2[take]
        labels[hit] = i
    return Assignment.from_labels(labels, n_d)
