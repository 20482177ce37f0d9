"""Random-walk motion of ground users with reflecting boundaries."""

from __future__ import annotations

import numpy as np

from .model import GroundNode, Point2D, Region, RngStream

__all__ = ["reflect", "node_step", "step_all_nodes"]


def reflect(coords: np.ndarray, side: float) -> np.ndarray:
    """Fold coordinates back into ``[0, side]`` by mirroring at the walls (in place)."""
    while True:
        low = coords < 0.0
        high = coords > side
        if not (low.any() or high.any()):
            return coords
        coords[low] = -coords[low]
        coords[high] = 2.0 * side - coords[high]


def _advance(xy: np.ndarray, step: float, side: float, theta: np.ndarray) -> None:
    xy[:, 0] += step * np.cos(theta)
    xy[:, 1] += step * np.sin(theta)
    reflect(xy, side)


def node_step(node: GroundNode, step: float, region: Region, rng: RngStream) -> GroundNode:
    """Move one user ``step`` metres along a uniform random heading."""
    xy = np.array([[node.pos.x, node.pos.y]], dtype=np.float64)
    _advance(xy, step, region.side, rng.angles(1))
    return GroundNode(node.id, Point2D(float(xy[0, 0]), float(xy[0, 1])))


def step_all_nodes(nodes: np.ndarray, step: float, region: Region, rng: RngStream) -> None:
    """Random-walk every user once, in id order of heading draws.

    ``nodes`` is the ``(n_g, 2)`` position array and is updated in place.
    """
    if len(nodes) == 0 or step == 0:
        return
    _advance(nodes, step, region.side, rng.angles(len(nodes)))
