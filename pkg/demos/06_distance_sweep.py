"""
Moving the eavesdropper away
============================

Average the Stackelberg outcome over Rayleigh realizations while the
eavesdropper recedes from the secondary transmitter.  With a smaller sample
than the default the trends are visible but noisier.
"""

from spectra_lease import ScenarioConfig, run_scenario1

cfg = ScenarioConfig(realizations=100)
print(f"{'d [m]':>7} {'R_s':>7} {'P_J [mW]':>9} {'alpha*beta':>10} {'leased':>7}")
for r in run_scenario1(cfg):
    print(
        f"{r['distance_m']:7.1f} {r['mean_secrecy_rate']:7.4f} {r['mean_p_j_mw']:9.2f} "
        f"{r['mean_alpha_beta']:10.3f} {r['lease_fraction']:7.2f}"
    )
