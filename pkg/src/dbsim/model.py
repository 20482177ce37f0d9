"""Domain types, scenario configuration and the seeded random stream.

All randomness in a run flows through a single :class:`RngStream` built on
the PCG64 generator (PCG XSL RR 128/64, O'Neill 2014) as shipped by numpy.
Only the raw 64-bit outputs are consumed, so the draw sequence can be
reproduced by any PCG64 implementation:

* uniform float in [0, 1): ``(raw >> 11) * 2**-53``
* fair bit: ``raw >> 63``

There is no stream splitting; every consumer draws from the one stream in a
fixed order documented by the engine.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ValidationError",
    "Policy",
    "Point2D",
    "Region",
    "GroundNode",
    "DroneState",
    "SimConfig",
    "RngStream",
    "init_world",
]

_TWO_POW_M53 = 2.0 ** -53


class ValidationError(ValueError):
    """Raised when a configuration or value violates its invariants."""


class Policy(str, enum.Enum):
    FEEDBACK = "feedback"
    RANDOM_WALK = "randomwalk"

    @classmethod
    def parse(cls, value: str | Policy) -> Policy:
        if isinstance(value, Policy):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValidationError(
                f"unknown policy {value!r}; expected 'feedback' or 'randomwalk'"
            ) from None


@dataclass(frozen=True, slots=True)
class Point2D:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValidationError(f"non-finite coordinates ({self.x}, {self.y})")

    def dist2(self, other: Point2D) -> float:
        dx = self.x - other.x
        dy = self.y - other.y
        return dx * dx + dy * dy

    def dist(self, other: Point2D) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True, slots=True)
class Region:
    """The ``side x side`` square with its lower-left corner at the origin."""

    side: float

    def __post_init__(self):
        if not (self.side > 0 and math.isfinite(self.side)):
            raise ValidationError(f"region side must be positive, got {self.side}")

    def contains(self, p: Point2D) -> bool:
        return 0.0 <= p.x <= self.side and 0.0 <= p.y <= self.side

    def clamp(self, p: Point2D) -> Point2D:
        x = min(max(p.x, 0.0), self.side)
        y = min(max(p.y, 0.0), self.side)
        if x == p.x and y == p.y:
            return p
        return Point2D(x, y)


@dataclass(frozen=True, slots=True)
class GroundNode:
    id: int
    pos: Point2D


@dataclass(slots=True)
class DroneState:
    """A drone's position plus the memory the feedback rule needs.

    ``m_prev`` is the connectivity seen at the previous tick, ``m_max`` the
    personal best (never below the threshold), ``m_current`` the latest count.
    """

    id: int
    pos: Point2D
    prev_pos: Point2D
    dest: Point2D
    m_prev: int = 0
    m_max: int = 0
    m_current: int = 0


def _check_count(name, value, minimum):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")


def _check_length(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, float, np.number)):
        raise ValidationError(f"{name} must be a number, got {value!r}")
    if not (math.isfinite(value) and value > 0):
        raise ValidationError(f"{name} must be positive and finite, got {value}")


@dataclass(frozen=True)
class SimConfig:
    """Scenario parameters.

    Defaults: ``n_d``, ``n_g``, ``t_max`` and ``phi`` are the evaluation
    settings of the original study (15 drones, 10^4 users, 10^3 s, threshold
    25). The geometry and speeds were never published; the values here give
    about 28 expected users per coverage disc (``n_g * pi * R^2 / L^2``), just
    above the threshold.
    """

    n_d: int = 15
    n_g: int = 10_000
    side_l: float = 1000.0
    radius_r: float = 30.0
    radius_overlap: float = 60.0
    phi: int = 25
    loss: int = 5
    drone_speed: float = 5.0
    node_step: float = 1.0
    t_max: int = 1000
    check_interval: int = 1
    seed: int = 0
    policy: Policy = Policy.FEEDBACK

    def __post_init__(self):
        object.__setattr__(self, "policy", Policy.parse(self.policy))
        _check_count("n_d", self.n_d, 1)
        _check_count("n_g", self.n_g, 0)
        _check_count("phi", self.phi, 0)
        _check_count("loss", self.loss, 0)
        _check_count("t_max", self.t_max, 1)
        _check_count("check_interval", self.check_interval, 1)
        _check_count("seed", self.seed, 0)
        if self.seed >= 2 ** 64:
            raise ValidationError(f"seed must fit in 64 bits, got {self.seed}")
        for name in ("side_l", "radius_r", "radius_overlap", "drone_speed"):
            _check_length(name, getattr(self, name))
        # stationary users are allowed
        if self.node_step != 0:
            _check_length("node_step", self.node_step)
        if self.radius_r > self.side_l:
            raise ValidationError(
                f"radius_r ({self.radius_r}) must not exceed side_l ({self.side_l})"
            )
        if self.radius_overlap > self.side_l * math.sqrt(2.0):
            raise ValidationError(
                f"radius_overlap ({self.radius_overlap}) exceeds the region diagonal"
            )

    @property
    def region(self) -> Region:
        return Region(float(self.side_l))

    def as_dict(self) -> dict:
        d = {name: getattr(self, name) for name in self.__dataclass_fields__}
        d["policy"] = self.policy.value
        return d


@dataclass
class RngStream:
    """Single-owner deterministic stream over PCG64 raw outputs."""

    seed: int
    _bitgen: np.random.PCG64 = field(init=False, repr=False)

    def __post_init__(self):
        self._bitgen = np.random.PCG64(self.seed)

    def raw(self, n: int | None = None):
        if n is None:
            return int(self._bitgen.random_raw())
        return self._bitgen.random_raw(n)

    def uniform(self) -> float:
        return (self.raw() >> 11) * _TWO_POW_M53

    def uniforms(self, n: int) -> np.ndarray:
        """``n`` uniforms in [0, 1), identical to ``n`` successive :meth:`uniform` calls."""
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * _TWO_POW_M53

    def bit(self) -> int:
        return self.raw() >> 63

    def angle(self) -> float:
        return 2.0 * math.pi * self.uniform()

    def angles(self, n: int) -> np.ndarray:
        return 2.0 * math.pi * self.uniforms(n)


def init_world(config: SimConfig, rng: RngStream):
    """Place users and drones uniformly over the region.

    Returns ``(nodes, drones)`` where ``nodes`` is an ``(n_g, 2)`` float array
    (row ``i`` is user ``i``) and ``drones`` a list of :class:`DroneState`.
    Draw order: every user's x then y in id order, then every drone's x then y.
    """
    if not isinstance(config, SimConfig):
        raise ValidationError(f"expected SimConfig, got {type(config).__name__}")
    side = float(config.side_l)
    nodes = rng.uniforms(2 * config.n_g).reshape(config.n_g, 2) * side
    xy = rng.uniforms(2 * config.n_d).reshape(config.n_d, 2) * side
    drones = []
    for i, (x, y) in enumerate(xy):
        p = Point2D(float(x), float(y))
        drones.append(DroneState(id=i, pos=p, prev_pos=p, dest=p, m_max=config.phi))
    return nodes, drones
