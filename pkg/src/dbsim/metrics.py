"""Connectivity statistics computed from run traces."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "EmptyTraces",
    "InsufficientData",
    "DroneStats",
    "RunSummary",
    "average_connectivity",
    "drone_stats",
    "trend_slope",
    "summarize",
]


class EmptyTraces(ValueError):
    pass


class InsufficientData(ValueError):
    pass


@dataclass(frozen=True)
class DroneStats:
    drone_id: int
    mean_m: float
    min_m: int
    max_m: int
    final_m: int


@dataclass(frozen=True)
class RunSummary:
    avg_connectivity: float
    per_drone: list[DroneStats]
    mean_m_timeseries: np.ndarray
    trend_slope: float


def _matrix(traces) -> np.ndarray:
    if len(traces) == 0:
        raise EmptyTraces("no traces recorded")
    return np.stack([np.asarray(tr.per_drone_m, dtype=np.int64) for tr in traces])


def average_connectivity(traces) -> float:
    """Total served users summed over drones, averaged over ticks.

    There is deliberately no division by the number of drones.
    """
    m = _matrix(traces)
    return int(m.sum()) / len(m)


def drone_stats(traces) -> list[DroneStats]:
    m = _matrix(traces)
    return [
        DroneStats(i, float(col.mean()), int(col.min()), int(col.max()), int(col[-1]))
        for i, col in enumerate(m.T)
    ]


def trend_slope(series) -> float:
    """Ordinary least-squares slope of ``series`` against its index."""
    y = np.asarray(series, dtype=np.float64)
    if y.size < 2:
        raise InsufficientData(f"need at least 2 points for a slope, got {y.size}")
    x = np.arange(y.size, dtype=np.float64)
    xc = x - x.mean()
    return float(np.dot(xc, y - y.mean()) / np.dot(xc, xc))


def summarize(traces) -> RunSummary:
    m = _matrix(traces)
    mean_ts = m.mean(axis=1)
    return RunSummary(
        avg_connectivity=average_connectivity(traces),
        per_drone=drone_stats(traces),
        mean_m_timeseries=mean_ts,
        trend_slope=trend_slope(mean_ts) if len(mean_ts) >= 2 else 0.0,
    )
