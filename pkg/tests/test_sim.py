import math
from dataclasses import replace

import numpy as np
import pytest

from spectra_lease.channel import Position, Topology
from spectra_lease.game import GameParams, PowerAllocation, SuConfig, TimeAllocation, stackelberg_solve
from spectra_lease.channel import build_channels
from spectra_lease.reputation import R_FLOOR, ReputationTable
from spectra_lease.selection import SelectionPolicy
from spectra_lease.sim import (
    ScenarioConfig,
    SlotState,
    Streams,
    SuBehavior,
    apply_behavior,
    run_policy,
    run_scenario1,
    run_scenario2,
    run_slot,
    run_streams,
    window_fractions,
)

FAST = ScenarioConfig(grid=19, n_slots=40, n_runs=2, window=10, realizations=20, distances=(5.0, 20.0, 80.0))


def test_behavior_validation():
    with pytest.raises(ValueError):
        SuBehavior("reliable", 0.2)
    with pytest.raises(ValueError):
        SuBehavior("greedy")


def test_reliable_su_never_deviates(rng):
    declared = PowerAllocation(1.0, 2.0, 1.4)
    ta, su = TimeAllocation(0.5, 0.5), SuConfig(5.0)
    for _ in range(100):
        assert apply_behavior(SuBehavior(), declared, ta, su, rng) == (declared, False)


def test_forced_defection(rng):
    ta, su = TimeAllocation(0.5, 0.75), SuConfig(5.0)
    realized, dev = apply_behavior(SuBehavior("selfish", 1.0), PowerAllocation(1.0, 2.0, 1.4), ta, su, rng)
    assert dev and realized.p_c == 0.0 and realized.p_j == 0.0
    assert realized.energy(ta.beta) == pytest.approx(su.p_max, rel=1e-12)


def test_deviation_frequency():
    rng = np.random.default_rng(12)
    ta, su, pw = TimeAllocation(0.5, 0.5), SuConfig(1.0), PowerAllocation(0.0, 1.0, 0.7)
    b = SuBehavior("selfish", 0.2)
    freq = np.mean([apply_behavior(b, pw, ta, su, rng)[1] for _ in range(100_000)])
    assert abs(freq - 0.2) < 0.01


def _single_su_state(behavior, gp=None):
    topo = Topology(Position(0, 0), Position(20, 0), Position(10, 60), (Position(10, 0),), (Position(10, 6),))
    return SlotState(topo, [behavior], ReputationTable([0]), SelectionPolicy.REPUTATION, SuConfig(10.0), gp or GameParams(), 19)


def test_single_reliable_su_realizes_the_solved_rate():
    state = _single_su_state(SuBehavior())
    for slot in range(20):
        streams = run_streams(3, slot)
        ch = build_channels(state.topology, run_streams(3, slot).channel)[0]
        out = run_slot(state, slot, streams)
        sol = stackelberg_solve(state.su, ch, state.game, 19)
        assert out.secrecy_rate == sol.secrecy_rate
        assert out.leased == sol.leased


def test_deviated_slot_zero_rate_and_floor():
    state = _single_su_state(SuBehavior("selfish", 1.0))
    state.table[0] = 1.0
    for slot in range(30):
        out = run_slot(state, slot, run_streams(4, slot))
        if out.leased:
            assert out.deviated and out.secrecy_rate == 0.0
            assert out.reputations[0] == R_FLOOR
            return
    pytest.fail("no leased slot")


def test_reliable_su_climbs_to_one_and_stays():
    state = _single_su_state(SuBehavior())
    leased = 0
    for slot in range(40):
        out = run_slot(state, slot, run_streams(5, slot))
        if out.leased:
            leased += 1
            assert out.realized.p_s == 0.0 or out.realized.p_c > 0  # served the PU
    assert leased > 0 and state.table[0] == 1.0


def test_policy_runs_are_deterministic():
    a = run_policy(FAST, SelectionPolicy.REPUTATION, 0)
    b = run_policy(FAST, SelectionPolicy.REPUTATION, 0)
    assert a == b


def test_slot_invariants():
    for policy in SelectionPolicy:
        prev = None
        for out in run_policy(FAST, policy, 1):
            if out.leased:
                ta = TimeAllocation(out.alpha_star, out.beta_star)
                assert out.realized.energy(ta.beta) == pytest.approx(FAST.p_max, rel=1e-9)
                if out.deviated:
                    assert out.realized.p_c == 0.0 and out.realized.p_j == 0.0
                    before = prev[out.selected] if prev else R_FLOOR
                    assert out.reputations[out.selected] <= before
                    assert out.secrecy_rate == 0.0
            if prev is not None:
                changed = {k for k in out.reputations if out.reputations[k] != prev.get(k)}
                assert changed <= ({out.selected} if out.leased else set())
            prev = out.reputations


def test_policies_share_geometry_and_fading():
    # the channel stream is consumed identically under every policy
    s = [run_streams(7, 0).channel.random() for _ in range(2)]
    assert s[0] == s[1]
    lease = [[o.leased for o in run_policy(FAST, p, 0)] for p in SelectionPolicy]
    assert lease[0] == lease[1] == lease[2]


def test_window_fractions():
    leased = np.array([[1, 1, 0, 1], [1, 1, 1, 1]], dtype=bool)
    selfish = np.array([[1, 0, 1, 1], [0, 0, 1, 1]], dtype=bool)
    assert window_fractions(leased, selfish, 2) == [(2, 0.25), (4, 1.0)]
    assert window_fractions(leased, selfish, 3)[1][0] == 4


def test_scenario2_rows_one_per_window_and_policy():
    rows = run_scenario2(FAST)
    assert len(rows) == 3 * 4
    assert {(r["window_end_slot"], r["policy"]) for r in rows} == {
        (w, p.value) for w in (10, 20, 30, 40) for p in SelectionPolicy
    }
    assert run_scenario2(FAST) == rows


def test_scenario2_single_policy():
    rows = run_scenario2(replace(FAST, policy="random"))
    assert {r["policy"] for r in rows} == {"random"}


def test_scenario1_rows_and_common_numbers():
    rows = run_scenario1(FAST)
    assert [r["distance_m"] for r in rows] == [5.0, 20.0, 80.0]
    # common random numbers: leasing can only become possible as ED recedes
    fr = [r["lease_fraction"] for r in rows]
    assert fr == sorted(fr)
    assert all(r["mean_secrecy_rate"] >= 0 for r in rows)
    assert run_scenario1(FAST) == rows


def test_parallel_map_matches_serial(monkeypatch):
    from spectra_lease import sim

    serial = run_scenario1(FAST)
    monkeypatch.setenv(sim.THREADS_ENV, "2")
    monkeypatch.setattr(sim.os, "cpu_count", lambda: 2)
    assert sim._workers() == 2
    assert run_scenario1(FAST) == serial


def test_config_validation():
    with pytest.raises(ValueError):
        ScenarioConfig(n_sus=0)
    with pytest.raises(ValueError):
        ScenarioConfig(policy="nearest")
    with pytest.raises(ValueError):
        ScenarioConfig(selfish_radius=90.0, reliable_radius=80.0)
    assert ScenarioConfig().n_selfish == 7
    assert sum(b.selfish for b in ScenarioConfig().behaviors()) == 7
