"""
Reputation bookkeeping
======================

The primary user compares the energy a secondary user spent on relaying and
jamming with the energy it spent on itself, and nudges its reputation by
eta3 * ln(ratio).  Reputations stay in [0.01, 1].
"""

from spectra_lease import ChannelSet, PowerAllocation, ReputationTable, second_hand
from spectra_lease.reputation import update_from_epsilon

eta3 = 0.1
ch = ChannelSet(g_ps=0.02, g_sp=0.015, g_ss=0.05, g_se=0.002)
table = ReputationTable(["a", "b"])
print("newcomers start at the floor:", table.snapshot())

# "a" serves the primary, "b" keeps the slot for itself
honest = PowerAllocation(p_s=0.0, p_c=8.0, p_j=5.6)
selfish = PowerAllocation(p_s=14.0, p_c=0.0, p_j=0.0)
table.observe("a", honest, ch, eta3)
table.observe("b", selfish, ch, eta3)
# p_s = 0 gives an infinite ratio, which lands straight on the ceiling
print("after one slot:", table.snapshot())

# slow climb versus instant crash
r = 0.01
for step in range(1, 6):
    r = update_from_epsilon(r, 3.0, eta3)
    print(f"step {step}: r = {r:.3f}")
print("one defection:", update_from_epsilon(r, 0.0, eta3))

# an unseen SU can borrow the average opinion of neighbouring primaries
print("second hand:", second_hand([0.9, 0.4, 0.65]))
