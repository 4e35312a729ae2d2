"""
Who gets the lease?
===================

Ten secondary users, seven of them selfish and sitting closer to the primary
transmitter.  Compare how often each selection policy hands the slot to an
unreliable node.  Scaled down from the full scenario to run in seconds.
"""

from spectra_lease import ScenarioConfig, run_scenario2

cfg = ScenarioConfig(n_slots=120, n_runs=3, window=20)
rows = run_scenario2(cfg)

by_policy = {}
for r in rows:
    by_policy.setdefault(r["policy"], []).append(r["p_unreliable"])

print("window end:", [r["window_end_slot"] for r in rows if r["policy"] == "random"])
for policy, series in by_policy.items():
    print(f"{policy:10s}", " ".join(f"{p:.2f}" for p in series))
