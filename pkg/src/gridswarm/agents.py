"""Agent state, run parameters, energy bookkeeping, and sensing.

An agent occupies either the air layer (mobile) or the ground layer
(settled) of a cell.  Its public state is the pair ``(s1, s2)``:
``s1`` is the settled sub-state it projects (mobile agents project
nothing meaningful), ``s2`` is algorithm-specific payload (a gradient
value or a direction code).
"""
from __future__ import annotations

from dataclasses import dataclass

# Modes (lifecycle).
MODE_MOBILE, MODE_SETTLED, MODE_SHUTDOWN, MODE_FAILED = range(4)
MODE_NAMES = {
    MODE_MOBILE: "mobile",
    MODE_SETTLED: "settled",
    MODE_SHUTDOWN: "shutdown",
    MODE_FAILED: "failed",
}

# Projected sub-states (s1).
S_MOBILE, S_BEACON, S_CLOSED_BEACON, S_LOW_ENERGY = range(4)
S1_NAMES = {
    S_MOBILE: "mobile",
    S_BEACON: "beacon",
    S_CLOSED_BEACON: "closed_beacon",
    S_LOW_ENERGY: "low_energy",
}

ALGORITHMS = ("sllg-ea", "slug-ea", "sltt-ea")
SCHEDULERS = ("random", "adversarial")

# Sensed-neighborhood cell markers.
SENSE_WALL = -1
SENSE_EMPTY = 0


class ParamError(ValueError):
    """Raised for inconsistent run parameters."""


@dataclass
class SimParams:
    """Parameters of a single run."""

    dt: int = 2
    e0: float = 20.0
    ecrit_mobile: float = 1.0
    ecrit_settled: float = 1.0
    alpha: float = 0.0
    m: int = 1000
    algorithm: str = "sllg-ea"
    approach: int = 1
    scheduler: str = "random"
    seed: int = 0
    max_steps: int | None = None

    def __post_init__(self) -> None:
        self.algorithm = str(self.algorithm).lower()
        self.scheduler = str(self.scheduler).lower()

    @property
    def d_max(self) -> int:
        """Maximum settling distance an agent can afford and still
        report energy exhaustion before shutting down."""
        return int(self.e0 - self.ecrit_mobile - 1)

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ParamError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.scheduler not in SCHEDULERS:
            raise ParamError(f"unknown scheduler {self.scheduler!r}; expected one of {SCHEDULERS}")
        if self.approach not in (1, 2):
            raise ParamError(f"approach must be 1 or 2, got {self.approach}")
        if self.dt < 1:
            raise ParamError(f"dt must be >= 1, got {self.dt}")
        if self.m < 1:
            raise ParamError(f"m must be >= 1, got {self.m}")
        if self.alpha < 0:
            raise ParamError(f"alpha must be >= 0, got {self.alpha}")
        if self.ecrit_mobile < 1:
            raise ParamError(f"ecrit_mobile must be >= 1, got {self.ecrit_mobile}")
        if self.ecrit_settled < 0:
            raise ParamError(f"ecrit_settled must be >= 0, got {self.ecrit_settled}")
        if self.e0 <= self.ecrit_mobile + 1:
            raise ParamError(
                f"e0 must exceed ecrit_mobile + 1 (got e0={self.e0}, ecrit_mobile={self.ecrit_mobile})"
            )
        if self.max_steps is not None and self.max_steps < 1:
            raise ParamError(f"max_steps must be >= 1, got {self.max_steps}")


@dataclass(slots=True)
class AgentRecord:
    """Mutable per-agent state tracked by the engine."""

    id: int
    mode: int
    s1: int
    s2: int
    pos: int  # linear cell index
    e0: float
    energy: float
    t_m: int = 0
    t_s: int = 0
    entered_at: int = 0
    settle_step: int = -1  # step during which the agent settled

    @property
    def consumed(self) -> float:
        """Total energy spent so far."""
        return self.e0 - self.energy


def energy_tick(a: AgentRecord, alpha: float, mode: int | None = None) -> None:
    """Apply one step of energy consumption to ``a``.

    ``mode`` overrides the agent's current mode, for agents that
    changed mode during the step but owe the cost of the mode they
    held when the step began.  Energy is recomputed from the ledger
    (``e0 - t_m - alpha * t_s``) so the identity holds exactly.
    A settled agent whose energy reaches zero fails.
    """
    if mode is None:
        mode = a.mode
    if mode == MODE_MOBILE:
        a.t_m += 1
    elif mode == MODE_SETTLED:
        a.t_s += 1
    else:
        return
    a.energy = a.e0 - a.t_m - alpha * a.t_s
    if a.mode == MODE_SETTLED and a.energy <= 0:
        a.mode = MODE_FAILED


def sense(world, a: AgentRecord) -> tuple:
    """Build the 10-slot sensed neighborhood of agent ``a``.

    Slots 0-4 are ground content of the own cell and its N, E, S, W
    neighbors; slots 5-9 are the corresponding air content.  Each slot
    holds ``SENSE_WALL`` (wall/outside), ``SENSE_EMPTY``, or the
    observed ``(s1, s2)`` of an agent.  Mobile agents sense both
    layers; settled agents sense only the ground layer (their air
    slots read empty).

    ``world`` must expose ``region``, ``ground`` and ``air`` (per-cell
    agent ids, 0 = empty) and ``agents`` (records indexed by id - 1).
    """
    region = world.region
    ground = world.ground
    agents = world.agents
    nbs = region.neighbors[a.pos]

    if a.mode == MODE_SETTLED:
        xi = [SENSE_EMPTY] * 10
        xi[0] = (a.s1, a.s2)
        for d in range(4):
            nb = nbs[d]
            if nb < 0:
                xi[1 + d] = SENSE_WALL
            else:
                gid = ground[nb]
                if gid:
                    g = agents[gid - 1]
                    xi[1 + d] = (g.s1, g.s2)
        return tuple(xi)

    if a.mode != MODE_MOBILE:
        raise ValueError(f"agent {a.id} cannot sense in mode {MODE_NAMES.get(a.mode, a.mode)}")

    air = world.air
    xi = [SENSE_EMPTY] * 10
    gid = ground[a.pos]
    if gid:
        g = agents[gid - 1]
        xi[0] = (g.s1, g.s2)
    xi[5] = (a.s1, a.s2)
    for d in range(4):
        nb = nbs[d]
        if nb < 0:
            xi[1 + d] = SENSE_WALL
            xi[6 + d] = SENSE_WALL
            continue
        gid = ground[nb]
        if gid:
            g = agents[gid - 1]
            xi[1 + d] = (g.s1, g.s2)
        aid = air[nb]
        if aid:
            other = agents[aid - 1]
            xi[6 + d] = (other.s1, other.s2)
    return tuple(xi)
