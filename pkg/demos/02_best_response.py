"""
The follower's best response
============================

Given the leader's time split (alpha, beta), the secondary user picks its own
transmit power p_s; relay and jamming powers follow from its energy budget.
The utility is strictly concave in p_s, so a golden-section search suffices.
"""

import numpy as np

from spectra_lease import ChannelSet, GameParams, SuConfig, TimeAllocation, su_best_response, su_utility
from spectra_lease import dependent_powers, utility_second_derivative

gp = GameParams()
su = SuConfig(p_max=10.0)
ta = TimeAllocation(alpha=0.6, beta=0.3)
ch = ChannelSet(g_ps=0.02, g_sp=0.015, g_ss=0.05, g_se=0.002)

p_star, u_star = su_best_response(ta, su, ch, gp)
print(f"p_s* = {p_star:.4f} mW, U = {u_star:.5f}")
print("powers at the optimum:", dependent_powers(p_star, ta, su, gp))

# sanity check against a dense scan of the feasible interval
hi = su.p_max / (1 - ta.beta)
grid = np.linspace(0.0, hi, 2001)
scan = [su_utility(p, ta, su, ch, gp) for p in grid[:-1]]
print(f"dense scan best: p_s = {grid[int(np.argmax(scan))]:.4f}, U = {max(scan):.5f}")

# curvature is negative everywhere
for p in (0.1, 1.0, 5.0):
    print(f"U''({p}) = {utility_second_derivative(p, ta, su, ch, gp):.3e}")

# a very strong own link and cheap power pull p_s just off zero
cheap = GameParams(eta1=1e-5, eta2=1e-5)
bright = ChannelSet(g_ps=0.02, g_sp=0.015, g_ss=50.0, g_se=0.002)
print("interior optimum:", su_best_response(TimeAllocation(0.9, 0.1), su, bright, cheap))
