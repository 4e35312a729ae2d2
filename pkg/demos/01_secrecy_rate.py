"""
Secrecy rate of a relayed, jammed transmission
==============================================

A primary transmitter leases part of its slot to a secondary user, which
relays the primary's data and jams an eavesdropper at the same time.
"""

import numpy as np

from spectra_lease import ChannelSet, GameParams, PowerAllocation, Position, TimeAllocation, Topology
from spectra_lease import build_channels, secrecy_rate

gp = GameParams()

# one realization of the four Rayleigh links for a single secondary user
topo = Topology(
    pt=Position(0, 0), pr=Position(20, 0), ed=Position(30, 0),
    st=(Position(10, 0),), sr=(Position(10, 6),),
)
ch = build_channels(topo, np.random.default_rng(3))[0]
print(ch)

# a fixed channel keeps the numbers below reproducible by hand
ch = ChannelSet(g_ps=0.02, g_sp=0.015, g_ss=0.05, g_se=0.004)
ta = TimeAllocation(0.5, 0.5)

# more jamming power lowers the leakage term, up to the hop bottleneck
for p_j in (0.0, 5.0, 20.0, 80.0):
    print(f"P_J = {p_j:5.1f} mW  ->  R_s = {secrecy_rate(ta, PowerAllocation(0.0, 10.0, p_j), ch, gp):.4f} bit/s/Hz")

# a listener with a better channel than either hop leaves nothing to secure
leaky = ChannelSet(g_ps=0.01, g_sp=0.01, g_ss=0.1, g_se=1.0)
print("leaky channel:", secrecy_rate(ta, PowerAllocation(0.0, 10.0, 0.0), leaky, gp))
