import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectra_lease.channel import ChannelSet
from spectra_lease.game import PowerAllocation
from spectra_lease.reputation import (
    R_FLOOR,
    ReputationTable,
    epsilon,
    first_hand_update,
    init_reputation,
    second_hand,
    update_from_epsilon,
)

CH = ChannelSet(g_ps=1.0, g_sp=3.0, g_ss=2.0, g_se=0.2)


def test_epsilon_worked_example():
    assert epsilon(PowerAllocation(0.5, 2.0, 1.4), CH) == pytest.approx((1.4 * 0.2 + 2.0 * 3.0) / (0.5 * 2.0))
    assert epsilon(PowerAllocation(0.5, 2.0, 1.4), CH) == pytest.approx(6.28)


def test_epsilon_balanced_is_neutral():
    # service term 0.28 + 0.72 = 1.0, own term 0.5 * 2 = 1.0
    pw = PowerAllocation(0.5, 0.24, 1.4)
    assert epsilon(pw, CH) == pytest.approx(1.0)
    assert first_hand_update(0.4, pw, CH, 0.1) == pytest.approx(0.4)


def test_epsilon_edge_cases():
    assert epsilon(PowerAllocation(1.0, 0.0, 0.0), CH) == 0.0
    assert epsilon(PowerAllocation(0.0, 1.0, 0.7), CH) == math.inf
    assert epsilon(PowerAllocation(0.0, 0.0, 0.0), CH) == 1.0


def test_update_examples():
    assert update_from_epsilon(0.5, math.e**2, 0.1) == pytest.approx(0.7)
    assert update_from_epsilon(0.99, math.e, 0.1) == 1.0
    assert update_from_epsilon(0.5, 1.0, 0.1) == 0.5


def test_full_defection_crashes_to_floor_in_one_step():
    defect = PowerAllocation(5.0, 0.0, 0.0)
    assert first_hand_update(1.0, defect, CH, 0.1) == R_FLOOR


def test_recovery_from_floor_takes_many_steps():
    eta3, eps = 0.1, math.e  # +0.1 per good slot
    target = 0.5
    steps = math.ceil((target - R_FLOOR) / (eta3 * math.log(eps)))
    r = update_from_epsilon(target, 0.0, eta3)
    assert r == R_FLOOR
    for _ in range(steps - 1):
        r = update_from_epsilon(r, eps, eta3)
    assert r < target
    assert update_from_epsilon(r, eps, eta3) >= target - 1e-12
    assert steps > 1


@settings(max_examples=200, deadline=None)
@given(st.floats(R_FLOOR, 1.0), st.floats(1e-6, 1e6), st.floats(1e-6, 1e6), st.floats(0.001, 1.0))
def test_update_monotone_in_epsilon(r, e1, e2, eta3):
    lo, hi = sorted((e1, e2))
    assert update_from_epsilon(r, lo, eta3) <= update_from_epsilon(r, hi, eta3)


def test_bounds_hold_under_random_sequences():
    rng = np.random.default_rng(8)
    for _ in range(10_000 // 50):
        r = init_reputation()
        eta3 = rng.uniform(0.01, 2.0)
        for _ in range(50):
            kind = rng.integers(4)
            eps = (0.0, math.inf, 1.0, rng.lognormal(0.0, 4.0))[kind]
            r = update_from_epsilon(r, eps, eta3)
            assert R_FLOOR <= r <= 1.0


def test_second_hand_mean():
    assert second_hand([0.4, 0.6]) == pytest.approx(0.5)
    assert second_hand([0.37]) == 0.37
    assert second_hand([0.2, 0.4, 0.9]) == pytest.approx(0.5)
    assert second_hand([]) == R_FLOOR


@given(st.lists(st.floats(R_FLOOR, 1.0), min_size=1, max_size=20), st.randoms())
def test_second_hand_permutation_invariant_and_bounded(reps, rnd):
    shuffled = list(reps)
    rnd.shuffle(shuffled)
    assert second_hand(shuffled) == pytest.approx(second_hand(reps), rel=1e-12)
    assert R_FLOOR - 1e-12 <= second_hand(reps) <= 1.0 + 1e-12


def test_init_is_floor():
    assert init_reputation() == 0.01


def test_table_registers_newcomers_at_floor_and_clamps():
    t = ReputationTable(range(3))
    assert t[7] == R_FLOOR and len(t) == 4
    t[1] = 5.0
    t[2] = -1.0
    assert t[1] == 1.0 and t[2] == R_FLOOR


def test_table_observe_neutral_leaves_value():
    t = ReputationTable([0])
    t.observe(0, PowerAllocation(0.0, 0.0, 0.0), CH, 0.1)
    assert t[0] == R_FLOOR


def test_table_second_hand_adoption():
    t = ReputationTable()
    neighbours = [{5: 0.8}, {5: 0.4}, {6: 1.0}]
    assert t.adopt_second_hand(5, neighbours) == pytest.approx(0.6)
    assert t.adopt_second_hand(9, neighbours) == R_FLOOR
