"""
Leader's choice of (alpha, beta)
================================

The primary user anticipates the follower's reaction and searches a grid of
time splits for the highest secrecy rate.
"""

import time

from spectra_lease import ChannelSet, GameParams, SuConfig, stackelberg_solve

gp = GameParams()
su = SuConfig(p_max=10.0)

for label, g_se in (("near eavesdropper", 0.01), ("far eavesdropper", 0.0005), ("no eavesdropper", 0.0)):
    ch = ChannelSet(g_ps=0.02, g_sp=0.015, g_ss=0.05, g_se=g_se)
    t0 = time.perf_counter()
    sol = stackelberg_solve(su, ch, gp)
    ms = 1e3 * (time.perf_counter() - t0)
    print(
        f"{label:18s} alpha*={sol.alpha_star:.2f} beta*={sol.beta_star:.2f} "
        f"P_J={sol.powers.p_j:6.2f} mW  R_s={sol.secrecy_rate:.4f}  ({ms:.1f} ms)"
    )

# a finer grid barely moves the answer
ch = ChannelSet(g_ps=0.02, g_sp=0.015, g_ss=0.05, g_se=0.002)
for grid in (19, 99, 399):
    print(grid, stackelberg_solve(su, ch, gp, grid=grid).secrecy_rate)

# an eavesdropper stronger than the relay hops means no lease
print(stackelberg_solve(su, ChannelSet(0.01, 0.01, 0.05, 0.1), gp))
