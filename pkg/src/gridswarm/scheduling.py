"""Wake-up scheduling: fair randomized and adversarial step orders.

Each time step is divided into ``m`` sub-steps.  Every active agent
wakes exactly once per step; under the randomized scheduler its
sub-step is drawn uniformly, under the adversarial scheduler agents
wake in ascending order of hop distance from the entry (ties broken
by ascending agent id).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .grid import Region, distance_from_entry

DEFAULT_SUBSTEPS = 1000


@dataclass(frozen=True)
class WakePlan:
    """Wake order for one time step: ``entries`` lists ``(agent_id,
    sub_step)`` pairs sorted by ``(sub_step, agent_id)``."""

    step: int
    entries: tuple[tuple[int, int], ...]

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(aid for aid, _ in self.entries)


def draw_wake_plan(
    agent_ids: Iterable[int], m: int, rng: np.random.Generator, step: int = 0
) -> WakePlan:
    """Draw a randomized wake plan: one uniform sub-step in [0, m) per
    agent, ordered by (sub_step, agent_id).

    Draws are assigned to agents in ascending id order, so the plan is
    reproducible for a given generator state.
    """
    if m < 1:
        raise ValueError(f"sub-step count m must be >= 1, got {m}")
    ids = sorted(agent_ids)
    if not ids:
        raise ValueError("cannot draw a wake plan for an empty agent set")
    subs = rng.integers(0, m, size=len(ids))
    entries = sorted(zip(ids, (int(s) for s in subs)), key=lambda e: (e[1], e[0]))
    return WakePlan(step=step, entries=tuple(entries))


def adversarial_order(
    agent_ids: Iterable[int],
    positions: Mapping[int, tuple[int, int]],
    region: Region,
    step: int = 0,
) -> WakePlan:
    """Deterministic worst-case wake plan: ascending hop distance from
    the entry, ties broken by ascending agent id.  Sub-steps are the
    consecutive ranks 0, 1, 2, ..."""
    ids = sorted(agent_ids)
    if not ids:
        raise ValueError("cannot order an empty agent set")
    ranked = sorted(ids, key=lambda aid: (distance_from_entry(region, positions[aid]), aid))
    entries = tuple((aid, rank) for rank, aid in enumerate(ranked))
    return WakePlan(step=step, entries=entries)
