"""Tick loop of the drone/user simulation.

Per tick, in order:

1. separate close drone pairs (feedback policy only);
2. associate users to drones;
3. for each drone in id order: remember its position, plan a destination and
   move up to ``drone_speed`` toward it;
4. random-walk every user;
5. re-associate and record each drone's count;
6. on check ticks (feedback policy only) undo the move of every drone whose
   count fell per :func:`~dbsim.policies.feedback_check`;
7. if anything was undone, re-associate once for all drones;
8. update personal bests and the previous-count memory.

Random draws happen in exactly this order: separation nudges for coincident
pairs, one planning draw per drone (a bit, or a heading when exploring or
under the random-walk policy), then one heading per user.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .association import associate_grid
from .mobility import step_all_nodes
from .model import DroneState, Policy, RngStream, SimConfig, init_world
from .policies import (
    Verdict,
    feedback_check,
    feedback_plan,
    move_toward,
    random_walk_policy,
    separate_all,
    update_personal_best,
)

__all__ = ["TickTrace", "RunResult", "World", "tick", "run"]


@dataclass(frozen=True)
class TickTrace:
    t: int
    per_drone_m: np.ndarray
    per_drone_pos: np.ndarray
    reverts: frozenset = frozenset()
    separations: int = 0


@dataclass
class RunResult:
    config: SimConfig
    traces: list[TickTrace]
    final_drones: list[DroneState]

    @property
    def m_matrix(self) -> np.ndarray:
        """Connection counts as a ``(t_max, n_d)`` integer array."""
        return np.stack([tr.per_drone_m for tr in self.traces])


@dataclass
class World:
    nodes: np.ndarray
    drones: list[DroneState]
    config: SimConfig
    rng: RngStream
    assoc: object = field(default=associate_grid, repr=False)

    @classmethod
    def create(cls, config: SimConfig, assoc=associate_grid) -> World:
        rng = RngStream(config.seed)
        nodes, drones = init_world(config, rng)
        return cls(nodes, drones, config, rng, assoc)

    def step(self, t: int) -> TickTrace:
        return tick(self.nodes, self.drones, self.config, self.rng, t, assoc=self.assoc)


def tick(nodes, drones, config: SimConfig, rng: RngStream, t: int, *, assoc=associate_grid) -> TickTrace:
    region = config.region
    r = config.radius_r
    feedback = config.policy is Policy.FEEDBACK

    separations = 0
    if feedback:
        separations = separate_all(drones, config.radius_overlap, region, rng)

    before = assoc(nodes, drones, r)
    labels = before.node_to_drone
    for d in drones:
        d.prev_pos = d.pos
        if feedback:
            decision = feedback_plan(
                d, nodes[labels == d.id], r, rng,
                drone_step=config.drone_speed, region=region,
            )
        else:
            decision = random_walk_policy(d, config.drone_speed, region, rng)
        d.dest = decision.new_dest
        d.pos = move_toward(d.pos, d.dest, config.drone_speed, region)

    step_all_nodes(nodes, config.node_step, region, rng)

    counts = assoc(nodes, drones, r).per_drone_count
    reverted = []
    if feedback and t % config.check_interval == 0:
        for d in drones:
            if feedback_check(int(counts[d.id]), d.m_prev, config.phi, config.loss) is Verdict.REVERT:
                d.pos = d.prev_pos
                reverted.append(d.id)
        if reverted:
            counts = assoc(nodes, drones, r).per_drone_count

    for d in drones:
        d.m_current = int(counts[d.id])
        d.m_max = update_personal_best(d.m_max, d.m_current, config.phi)
        d.m_prev = d.m_current

    return TickTrace(
        t=t,
        per_drone_m=counts.copy(),
        per_drone_pos=np.array([(d.pos.x, d.pos.y) for d in drones], dtype=np.float64),
        reverts=frozenset(reverted),
        separations=separations,
    )


def run(config: SimConfig, *, assoc=associate_grid) -> RunResult:
    """Simulate ``config.t_max`` ticks from a freshly seeded world."""
    world = World.create(config, assoc)
    traces = [world.step(t) for t in range(config.t_max)]
    return RunResult(config, traces, world.drones)
