"""Discrete-time simulation engine.

One time step runs: (1) an entry attempt every ``dt`` steps, before any
wake-up; (2) every active agent wakes exactly once at its scheduled
sub-step and senses the world as left by earlier wake-ups of the same
step; (3) energy is charged according to the mode each agent held when
the step began; (4) termination is detected from the entry cell.

For speed on large regions the engine elides wake-ups that are
provably no-ops: a settled agent's decision depends only on its own
record and the ground state of its four neighbors, so it is only
processed while "stale" - newly settled, a neighbor's projected state
changed, or its energy crossed a reporting threshold.  Skipped agents
behave identically to processed ones because their decision would
return their current sub-state unchanged.  Settled energy is likewise
closed-form in the number of settled steps, so per-step ticking is
replaced by scheduled threshold events; the ledger identity
``energy = e0 - t_m - alpha * t_s`` is preserved exactly.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .agents import (
    MODE_FAILED,
    MODE_MOBILE,
    MODE_SETTLED,
    MODE_SHUTDOWN,
    S1_NAMES,
    S_BEACON,
    S_CLOSED_BEACON,
    S_LOW_ENERGY,
    S_MOBILE,
    SENSE_EMPTY,
    AgentRecord,
    SimParams,
    sense,
)
from .grid import Region
from .rules import (
    A_MOVE,
    A_SETTLE_AT,
    A_SETTLE_HERE,
    A_SHUTDOWN,
    A_STAY,
    REGISTRY,
)

TERM_CLOSED = "closed"
TERM_LOW_ENERGY = "low_energy"
TERM_STEP_CAP = "step_cap"


class InvariantError(AssertionError):
    """A run violated a structural invariant; always a bug."""


@dataclass(frozen=True, slots=True)
class Event:
    """One line of the event log."""

    t: int
    agent: int
    action: str
    src: int  # linear cell index, -1 if not applicable
    dst: int
    s1: int
    s2: int
    energy: float

    def format(self) -> str:
        src = "-" if self.src < 0 else str(self.src)
        dst = "-" if self.dst < 0 else str(self.dst)
        return (
            f"{self.t},{self.agent},{self.action},{src},{dst},"
            f"{S1_NAMES[self.s1]},{self.s2},{self.energy:g}"
        )


@dataclass
class RunMetrics:
    terminated: str
    t_c: int
    n_agents: int
    e_total: float
    max_ei: float
    a_c: int
    nda_shutdown: int
    nda_failed: int
    n_series: list[int] = field(repr=False, default_factory=list)
    ac_series: list[int] = field(repr=False, default_factory=list)


@dataclass
class RunResult:
    metrics: RunMetrics
    events: list[Event] | None
    sim: "Simulation"


def default_step_cap(region: Region, p: SimParams) -> int:
    return 50 * region.n * (p.dt + 2)


class _RandomSource:
    """Buffered uniform draws from a seeded generator.

    Provides the two primitives the decision rules and the scheduler
    need - a uniform float and a uniform integer - while amortizing the
    generator call over blocks of draws.
    """

    __slots__ = ("rng", "_pool", "_i")
    _BLOCK = 4096

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self._pool = rng.random(self._BLOCK).tolist()
        self._i = 0

    def random(self) -> float:
        i = self._i
        if i >= self._BLOCK:
            self._pool = self.rng.random(self._BLOCK).tolist()
            self._i = i = 0
        self._i = i + 1
        return self._pool[i]

    def integers(self, low: int, high: int) -> int:
        """One uniform integer in [low, high)."""
        return low + int(self.random() * (high - low))


class Simulation:
    """Mutable world state for one run."""

    def __init__(self, region: Region, params: SimParams, log_events: bool = False):
        params.validate()
        self.region = region
        self.p = params
        self.rng = _RandomSource(np.random.default_rng(params.seed))
        ncells = region.width * region.height
        self.ground = [0] * ncells  # settled agent id per cell, 0 = empty
        self.air = [0] * ncells  # mobile agent id per cell, 0 = empty
        self.agents: list[AgentRecord] = []
        self.mobile_ids: list[int] = []
        self.settled_count = 0
        self.nda_shutdown = 0
        self.nda_failed = 0
        self.stale: set[int] = set()
        self.events: list[Event] | None = [] if log_events else None
        self.n_series: list[int] = []
        self.ac_series: list[int] = []
        # Scheduled settled-energy events: (step, kind, agent_id) with
        # kind 0 = crosses the reporting threshold, 1 = fails.
        self._energy_events: list[tuple[int, int, int]] = []
        self._mobile_decide, self._settled_decide = REGISTRY[params.algorithm]
        self.t = 0
        self.terminated: str | None = None

    # -- helpers -----------------------------------------------------------

    def _log(self, t, agent, action, src, dst):
        if self.events is not None:
            self.events.append(
                Event(t, agent.id, action, src, dst, agent.s1, agent.s2, agent.energy)
            )

    def _touch_settled_energy(self, a: AgentRecord, t: int) -> None:
        """Materialize a settled agent's lazily tracked energy as of the
        ticks applied through the end of step ``t - 1``."""
        if a.settle_step >= 0 and a.mode == MODE_SETTLED:
            a.t_s = max(0, t - 1 - a.settle_step)
            a.energy = a.e0 - a.t_m - self.p.alpha * a.t_s

    def _schedule_energy_events(self, a: AgentRecord) -> None:
        p = self.p
        if p.alpha <= 0:
            return
        # Energy entering settled life: the settling step itself is
        # still charged as a movement tick at the end of the step.
        e_settle = a.e0 - (a.t_m + 1)
        s = a.settle_step

        def first_step(threshold: float) -> int:
            # Smallest end-of-step index t with e_settle - alpha*(t - s) <= threshold.
            k = math.ceil((e_settle - threshold) / p.alpha - 1e-12)
            while e_settle - p.alpha * (k - 1) <= threshold:
                k -= 1
            while e_settle - p.alpha * k > threshold:
                k += 1
            return s + max(k, 1)

        if e_settle > p.ecrit_settled:
            heapq.heappush(self._energy_events, (first_step(p.ecrit_settled), 0, a.id))
        heapq.heappush(self._energy_events, (first_step(0.0), 1, a.id))

    def _mark_ground_change(self, cell: int, cur_key, heap, scheduled, processed):
        """A cell's projected ground state changed: settled neighbors
        (and the cell's own occupant) must be re-processed.  If their
        wake this step is still ahead, they wake into the change now;
        otherwise they stay flagged for the next step."""
        for c in (cell, *self.region.neighbors[cell]):
            if c < 0:
                continue
            gid = self.ground[c]
            if not gid:
                continue
            g = self.agents[gid - 1]
            if g.mode != MODE_SETTLED or g.s1 == S_LOW_ENERGY:
                continue
            self.stale.add(gid)
            if gid in scheduled or gid in processed or heap is None:
                continue
            key = self._lazy_key(gid, cur_key)
            if key is not None and key > cur_key:
                scheduled.add(gid)
                heapq.heappush(heap, (key, gid))

    def _lazy_key(self, aid: int, cur_key):
        """Sub-step key for an agent inserted mid-step."""
        if self._rank_map is not None:  # adversarial: ranks are fixed
            rank = self._rank_map.get(aid)
            return None if rank is None else (rank, aid)
        return (self.rng.integers(0, self.p.m), aid)

    # -- entry -------------------------------------------------------------

    def _attempt_entry(self, t: int) -> None:
        entry = self.region.entry
        if self.air[entry]:
            return
        gid = self.ground[entry]
        s2 = self.agents[gid - 1].s2 if gid else 0
        aid = len(self.agents) + 1
        # Entering consumes one unit of movement energy.
        a = AgentRecord(
            id=aid,
            mode=MODE_MOBILE,
            s1=S_MOBILE,
            s2=s2,
            pos=entry,
            e0=self.p.e0,
            energy=self.p.e0 - 1,
            t_m=1,
            entered_at=t,
        )
        self.agents.append(a)
        self.air[entry] = aid
        self.mobile_ids.append(aid)
        self._log(t, a, "enter", -1, entry)

    # -- one step ----------------------------------------------------------

    def step(self) -> None:
        t = self.t
        p = self.p

        # Agents owe this step's energy for the mode they hold now; the
        # entrant (added after the wake-ups below) is not yet on the list.
        mobile_at_start = self.mobile_ids[:]

        # Candidates: all mobiles plus stale settled agents.
        if self.stale:
            candidates = sorted(
                mobile_at_start
                + [aid for aid in self.stale if self.agents[aid - 1].mode == MODE_SETTLED]
            )
        else:
            candidates = mobile_at_start

        scheduled: set[int] = set()
        processed: set[int] = set()
        self._rank_map = None
        if p.scheduler == "adversarial":
            actives = [
                a.id
                for a in self.agents
                if a.mode in (MODE_MOBILE, MODE_SETTLED) and a.entered_at < t
            ]
            dist = self.region.distances
            order = sorted(actives, key=lambda aid: (dist[self.agents[aid - 1].pos], aid))
            self._rank_map = {aid: rank for rank, aid in enumerate(order)}
            heap = [((self._rank_map[aid], aid), aid) for aid in candidates]
        else:
            rnd = self.rng.random
            m = p.m
            heap = [((int(rnd() * m), aid), aid) for aid in candidates]
        heapq.heapify(heap)
        scheduled.update(candidates)

        while heap:
            key, aid = heapq.heappop(heap)
            if aid in processed:
                continue
            processed.add(aid)
            a = self.agents[aid - 1]
            if a.mode == MODE_MOBILE:
                xi = sense(self, a)
                act = self._mobile_decide(a, xi, p, self.rng)
                self._apply_mobile(a, act, t, key, heap, scheduled, processed)
            elif a.mode == MODE_SETTLED and a.s1 != S_LOW_ENERGY:
                self._touch_settled_energy(a, t)
                xi = sense(self, a)
                new_s1 = self._settled_decide(a, xi, p, p.approach)
                self.stale.discard(aid)
                if new_s1 != a.s1:
                    if a.s1 == S_CLOSED_BEACON and new_s1 == S_BEACON:
                        raise InvariantError(f"agent {aid} reopened a closed beacon")
                    if new_s1 == S_CLOSED_BEACON and any(
                        xi[d] == SENSE_EMPTY for d in (1, 2, 3, 4)
                    ):
                        raise InvariantError(
                            f"agent {aid} closed with an empty neighbor in sight"
                        )
                    a.s1 = new_s1
                    self._log(t, a, "transition", a.pos, a.pos)
                    self._mark_ground_change(a.pos, key, heap, scheduled, processed)
            else:
                self.stale.discard(aid)

        # A new agent may enter once this step's wake-ups have resolved; it
        # stays dormant (no sensing, no energy tick) until the next step.
        if t % p.dt == 0:
            self._attempt_entry(t)

        # Energy ticks for agents that were mobile when the step began.
        alpha = p.alpha
        for aid in mobile_at_start:
            a = self.agents[aid - 1]
            a.t_m += 1
            a.energy = a.e0 - a.t_m - alpha * a.t_s

        # Scheduled settled-energy threshold crossings and failures.
        while self._energy_events and self._energy_events[0][0] <= t:
            _, kind, aid = heapq.heappop(self._energy_events)
            a = self.agents[aid - 1]
            if a.mode != MODE_SETTLED:
                continue
            a.t_s = t - a.settle_step
            a.energy = a.e0 - a.t_m - alpha * a.t_s
            if kind == 1 and a.energy <= 0:
                a.mode = MODE_FAILED
                self.ground[a.pos] = 0
                self.settled_count -= 1
                self.nda_failed += 1
                self.stale.discard(aid)
                self._log(t, a, "fail", a.pos, a.pos)
                self._mark_ground_change(a.pos, None, None, scheduled, processed)
            elif kind == 0 and a.energy <= p.ecrit_settled and a.s1 != S_LOW_ENERGY:
                self.stale.add(aid)

        self.n_series.append(len(self.agents))
        self.ac_series.append(self.settled_count)

        gid = self.ground[self.region.entry]
        if gid:
            s1 = self.agents[gid - 1].s1
            if s1 == S_LOW_ENERGY:
                self.terminated = TERM_LOW_ENERGY
            elif s1 == S_CLOSED_BEACON:
                self.terminated = TERM_CLOSED
        self.t += 1

    def _apply_mobile(self, a, act, t, key, heap, scheduled, processed):
        kind = act.kind
        if kind == A_STAY:
            return
        if kind == A_SHUTDOWN:
            self.air[a.pos] = 0
            a.mode = MODE_SHUTDOWN
            self.mobile_ids.remove(a.id)
            self.nda_shutdown += 1
            self._log(t, a, "shutdown", a.pos, -1)
            return
        if kind == A_MOVE:
            dst = self.region.neighbors[a.pos][act.direction - 1]
            if dst < 0 or self.air[dst]:
                raise InvariantError(f"agent {a.id} moved into an occupied or wall cell")
            src = a.pos
            self.air[src] = 0
            self.air[dst] = a.id
            a.pos = dst
            a.s2 = act.s2
            self._log(t, a, "move", src, dst)
            return
        # Settle, either in place or into an adjacent empty cell.
        src = a.pos
        if kind == A_SETTLE_AT:
            dst = self.region.neighbors[a.pos][act.direction - 1]
            if dst < 0 or self.ground[dst]:
                raise InvariantError(f"agent {a.id} settled into an occupied or wall cell")
        else:
            dst = a.pos
            if self.ground[dst]:
                raise InvariantError(f"agent {a.id} settled onto an occupied cell")
        self.air[src] = 0
        self.ground[dst] = a.id
        a.pos = dst
        a.mode = MODE_SETTLED
        a.s1 = S_BEACON
        a.s2 = act.s2
        a.settle_step = t
        self.mobile_ids.remove(a.id)
        self.settled_count += 1
        self.stale.add(a.id)
        self._schedule_energy_events(a)
        self._log(t, a, "settle", src, dst)
        self._mark_ground_change(dst, key, heap, scheduled, processed)

    # -- whole runs --------------------------------------------------------

    def run(self) -> RunResult:
        cap = self.p.max_steps or default_step_cap(self.region, self.p)
        while self.terminated is None:
            self.step()
            if self.terminated is None and self.t >= cap:
                self.terminated = TERM_STEP_CAP
        t_end = self.t - 1
        for a in self.agents:
            self._touch_settled_energy(a, t_end + 1)
        e_total = sum(a.e0 - a.energy for a in self.agents)
        max_ei = max((a.e0 - a.energy for a in self.agents), default=0.0)
        metrics = RunMetrics(
            terminated=self.terminated,
            t_c=t_end,
            n_agents=len(self.agents),
            e_total=e_total,
            max_ei=max_ei,
            a_c=self.settled_count,
            nda_shutdown=self.nda_shutdown,
            nda_failed=self.nda_failed,
            n_series=self.n_series,
            ac_series=self.ac_series,
        )
        return RunResult(metrics=metrics, events=self.events, sim=self)


def run(region: Region, params: SimParams, log_events: bool = False) -> RunResult:
    """Simulate one run to termination (or the step cap)."""
    return Simulation(region, params, log_events=log_events).run()
