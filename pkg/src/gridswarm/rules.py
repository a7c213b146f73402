"""Per-wake decision rules for the three coverage algorithms.

Every rule is a pure function of the agent's own state, its sensed
neighborhood, and the run parameters; random tie-breaking consumes
draws from the supplied generator.  Mobile rules return movement /
settling / shutdown actions, settled rules return the sub-state the
agent projects next (beacon, closed beacon, or low energy).

Algorithm summary:

* ``sllg-ea`` - agents climb a step-count gradient whose steepness is
  exactly one, settling one past the frontier.
* ``slug-ea`` - gradient of unbounded steepness; a mobile agent
  re-synchronizes its own counter from the beacon beneath it at every
  wake.
* ``sltt-ea`` - beacons project the direction code of the move that
  created them, so the settled agents form a spanning tree that
  mobile agents follow outward and retrace inward.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .agents import (
    S_BEACON,
    S_CLOSED_BEACON,
    S_LOW_ENERGY,
    SENSE_EMPTY,
    AgentRecord,
    SimParams,
)
from .grid import DIRECTIONS

# Action kinds for mobile agents.
A_STAY, A_MOVE, A_SETTLE_HERE, A_SETTLE_AT, A_SHUTDOWN = range(5)
ACTION_NAMES = {
    A_STAY: "stay",
    A_MOVE: "move",
    A_SETTLE_HERE: "settle",
    A_SETTLE_AT: "settle",
    A_SHUTDOWN: "shutdown",
}


@dataclass(frozen=True, slots=True)
class Action:
    """Outcome of one mobile wake-up."""

    kind: int
    direction: int = 0  # 1-4 for A_MOVE / A_SETTLE_AT
    s2: int = 0  # payload the agent carries or projects after acting


STAY = Action(A_STAY)
SHUTDOWN = Action(A_SHUTDOWN)


def _pick(rng: np.random.Generator, items: list):
    """Uniform choice; always consumes exactly one draw."""
    return items[int(rng.integers(0, len(items)))]


def _empty_dirs(xi: tuple) -> list[int]:
    return [d for d in DIRECTIONS if xi[d] == SENSE_EMPTY]


# ---------------------------------------------------------------------------
# Mobile rules
# ---------------------------------------------------------------------------


def mobile_decide_sllg(
    a: AgentRecord, xi: tuple, p: SimParams, rng: np.random.Generator
) -> Action:
    if a.energy <= p.ecrit_mobile:
        return SHUTDOWN
    empties = _empty_dirs(xi)
    if xi[0] == SENSE_EMPTY:
        return Action(A_SETTLE_HERE, s2=1)
    if empties:
        d = _pick(rng, empties)
        return Action(A_SETTLE_AT, direction=d, s2=a.s2 + 1)
    # Advance: beacons exactly one step up the gradient, air above free.
    dest = a.s2 + 1
    relevant = [
        d
        for d in DIRECTIONS
        if isinstance(xi[d], tuple) and xi[d][0] == S_BEACON and xi[d][1] == dest
    ]
    if relevant:
        possible = [d for d in relevant if xi[5 + d] == SENSE_EMPTY]
        if possible:
            return Action(A_MOVE, direction=_pick(rng, possible), s2=dest)
        return STAY
    # Retrace: closed beacons strictly below the own counter.
    relevant = [
        d
        for d in DIRECTIONS
        if isinstance(xi[d], tuple) and xi[d][0] == S_CLOSED_BEACON and xi[d][1] < a.s2
    ]
    possible = [d for d in relevant if xi[5 + d] == SENSE_EMPTY]
    if possible:
        best = max(xi[d][1] for d in possible)
        cands = [d for d in possible if xi[d][1] == best]
        return Action(A_MOVE, direction=_pick(rng, cands), s2=best)
    return STAY


def mobile_decide_slug(
    a: AgentRecord, xi: tuple, p: SimParams, rng: np.random.Generator
) -> Action:
    if a.energy <= p.ecrit_mobile:
        return SHUTDOWN
    # Re-synchronize the own counter from the agent settled beneath.
    s2 = xi[0][1] if isinstance(xi[0], tuple) else a.s2
    empties = _empty_dirs(xi)
    if xi[0] == SENSE_EMPTY:
        return Action(A_SETTLE_HERE, s2=1)
    if empties:
        d = _pick(rng, empties)
        return Action(A_SETTLE_AT, direction=d, s2=s2 + 1)
    # Advance: any beacon with free air; target the minimal counter
    # strictly above the own one.
    relevant = [
        d
        for d in DIRECTIONS
        if isinstance(xi[d], tuple) and xi[d][0] == S_BEACON and xi[5 + d] == SENSE_EMPTY
    ]
    if relevant:
        ups = [d for d in relevant if xi[d][1] > s2]
        if not ups:
            return Action(A_STAY, s2=s2)
        dest = min(xi[d][1] for d in ups)
        cands = [d for d in ups if xi[d][1] == dest]
        return Action(A_MOVE, direction=_pick(rng, cands), s2=dest)
    # Retrace: beacons or closed beacons with free air, maximal counter
    # strictly below the own one.
    relevant = [
        d
        for d in DIRECTIONS
        if isinstance(xi[d], tuple)
        and xi[d][0] in (S_BEACON, S_CLOSED_BEACON)
        and xi[5 + d] == SENSE_EMPTY
    ]
    downs = [d for d in relevant if xi[d][1] < s2]
    if downs:
        dest = max(xi[d][1] for d in downs)
        cands = [d for d in downs if xi[d][1] == dest]
        return Action(A_MOVE, direction=_pick(rng, cands), s2=dest)
    return Action(A_STAY, s2=s2)


def mobile_decide_sltt(
    a: AgentRecord, xi: tuple, p: SimParams, rng: np.random.Generator
) -> Action:
    if a.energy <= p.ecrit_mobile:
        return SHUTDOWN
    empties = _empty_dirs(xi)
    if xi[0] == SENSE_EMPTY:
        return Action(A_SETTLE_HERE, s2=0)
    if empties:
        d = _pick(rng, empties)
        return Action(A_SETTLE_AT, direction=d, s2=d)
    # Advance: beacons whose direction code points away from here,
    # i.e. a beacon in direction d projecting code d (a tree child).
    relevant = [
        d
        for d in DIRECTIONS
        if isinstance(xi[d], tuple) and xi[d][0] == S_BEACON and xi[d][1] == d
    ]
    if relevant:
        possible = [d for d in relevant if xi[5 + d] == SENSE_EMPTY]
        if possible:
            d = _pick(rng, possible)
            return Action(A_MOVE, direction=d, s2=d)
        return STAY
    # Retrace: closed beacons whose code points back at this cell.
    relevant = [
        d
        for d in DIRECTIONS
        if isinstance(xi[d], tuple)
        and xi[d][0] == S_CLOSED_BEACON
        and abs(xi[d][1] - d) == 2
    ]
    possible = [d for d in relevant if xi[5 + d] == SENSE_EMPTY]
    if possible:
        d = _pick(rng, possible)
        return Action(A_MOVE, direction=d, s2=d)
    return STAY


# ---------------------------------------------------------------------------
# Settled rules
# ---------------------------------------------------------------------------


def _settled_decide(
    a: AgentRecord, xi: tuple, p: SimParams, approach: int, relevant: set[int]
) -> int:
    """Shared settled-state machine.

    ``relevant`` is the set of neighbor directions the closure
    condition quantifies over: the up-gradient neighbors (counter
    algorithms) or the tree children (direction-code algorithm).
    Returns the next projected sub-state.
    """
    empties = [d for d in DIRECTIONS if xi[d] == SENSE_EMPTY]
    le_dirs = {
        d for d in DIRECTIONS if isinstance(xi[d], tuple) and xi[d][0] == S_LOW_ENERGY
    }
    cb_dirs = {
        d for d in DIRECTIONS if isinstance(xi[d], tuple) and xi[d][0] == S_CLOSED_BEACON
    }

    # Own exhaustion is reported immediately under both approaches.
    if a.energy <= p.ecrit_settled:
        return S_LOW_ENERGY

    if approach == 1:
        if le_dirs:
            return S_LOW_ENERGY
        if not empties and relevant <= cb_dirs:
            return S_CLOSED_BEACON
        return a.s1

    # Approach 2: a neighbor's exhaustion propagates only once it cannot
    # cut off still-reachable empty cells, and it must arrive via an
    # actual low-energy neighbor so full coverage still closes through
    # the entry as a closed beacon.
    if not empties and le_dirs and relevant <= (le_dirs | cb_dirs):
        return S_LOW_ENERGY
    if not empties and relevant <= cb_dirs:
        return S_CLOSED_BEACON
    return a.s1


def settled_decide_sllg(a: AgentRecord, xi: tuple, p: SimParams, approach: int) -> int:
    relevant = {
        d
        for d in DIRECTIONS
        if isinstance(xi[d], tuple) and xi[d][1] == a.s2 + 1
    }
    return _settled_decide(a, xi, p, approach, relevant)


def settled_decide_slug(a: AgentRecord, xi: tuple, p: SimParams, approach: int) -> int:
    if a.s2 >= p.d_max:
        # A counter at the settling horizon can never be climbed past
        # (followers on a costlier trajectory would only shut down), so
        # it reports exhaustion immediately.
        return S_LOW_ENERGY
    relevant = {
        d for d in DIRECTIONS if isinstance(xi[d], tuple) and xi[d][1] > a.s2
    }
    return _settled_decide(a, xi, p, approach, relevant)


def settled_decide_sltt(a: AgentRecord, xi: tuple, p: SimParams, approach: int) -> int:
    relevant = {
        d for d in DIRECTIONS if isinstance(xi[d], tuple) and xi[d][1] == d
    }
    return _settled_decide(a, xi, p, approach, relevant)


REGISTRY = {
    "sllg-ea": (mobile_decide_sllg, settled_decide_sllg),
    "slug-ea": (mobile_decide_slug, settled_decide_slug),
    "sltt-ea": (mobile_decide_sltt, settled_decide_sltt),
}
