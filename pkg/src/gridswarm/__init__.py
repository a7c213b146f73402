"""Simulator and analysis toolkit for distributed uniform coverage of
unknown grid regions by energy-constrained agents entering through a
single entry cell."""

from .agents import (
    ALGORITHMS,
    SCHEDULERS,
    AgentRecord,
    ParamError,
    SimParams,
    energy_tick,
    sense,
)
from .engine import (
    Event,
    InvariantError,
    RunMetrics,
    RunResult,
    Simulation,
    run,
)
from .grid import (
    Region,
    RegionError,
    distance_from_entry,
    line_region,
    neighborhood_positions,
    opposite,
    parse_region,
    square_region,
)
from .scheduling import WakePlan, adversarial_order, draw_wake_plan

__all__ = [
    "ALGORITHMS",
    "SCHEDULERS",
    "AgentRecord",
    "Event",
    "InvariantError",
    "ParamError",
    "Region",
    "RegionError",
    "RunMetrics",
    "RunResult",
    "SimParams",
    "Simulation",
    "WakePlan",
    "adversarial_order",
    "distance_from_entry",
    "draw_wake_plan",
    "energy_tick",
    "line_region",
    "neighborhood_positions",
    "opposite",
    "parse_region",
    "run",
    "sense",
    "square_region",
]

__version__ = "0.1.0"
