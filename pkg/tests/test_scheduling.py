"""Wake-plan drawing and the adversarial ordering."""
import numpy as np
import pytest

from gridswarm.grid import line_region, parse_region
from gridswarm.scheduling import adversarial_order, draw_wake_plan


class TestRandomWakePlan:
    def test_entries_sorted_by_substep_then_id(self):
        rng = np.random.default_rng(7)
        plan = draw_wake_plan([3, 1, 2], m=10, rng=rng, step=0)
        keys = [(sub, aid) for aid, sub in plan.entries]
        assert keys == sorted(keys)
        assert sorted(plan.order) == [1, 2, 3]

    def test_substeps_uniform(self):
        rng = np.random.default_rng(0)
        counts = np.zeros(4, dtype=int)
        for step in range(4000):
            plan = draw_wake_plan([1], m=4, rng=rng, step=step)
            counts[plan.entries[0][1]] += 1
        # Each of the 4 sub-steps should get about a quarter of draws.
        assert counts.min() > 850
        assert counts.max() < 1150

    def test_ties_broken_by_id(self):
        rng = np.random.default_rng(0)
        plan = draw_wake_plan([5, 2, 9], m=1, rng=rng, step=0)
        assert plan.order == (2, 5, 9)

    def test_empty_agent_set_rejected(self):
        with pytest.raises(ValueError):
            draw_wake_plan([], m=4, rng=np.random.default_rng(0))


class TestAdversarialOrder:
    def test_orders_by_distance_then_id(self):
        region = line_region(6)
        positions = {1: (3, 0), 2: (0, 0), 3: (3, 0), 4: (5, 0)}
        plan = adversarial_order([1, 2, 3, 4], positions, region, step=0)
        assert plan.order == (2, 1, 3, 4)

    def test_ranks_are_consecutive(self):
        region = parse_region("E....")
        plan = adversarial_order([10, 11], {10: (4, 0), 11: (1, 0)}, region, step=2)
        assert [sub for _, sub in plan.entries] == [0, 1]
        assert plan.order == (11, 10)
