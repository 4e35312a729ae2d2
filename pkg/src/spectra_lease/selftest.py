"""Quick oracle checks runnable from an installed copy (``spectra-lease selftest``)."""

from __future__ import annotations

import math

import numpy as np

from .channel import ChannelSet
from .game import (
    GameParams,
    SuConfig,
    TimeAllocation,
    _feasible_upper,
    dependent_powers,
    secrecy_rate,
    su_best_response,
    su_utility,
    utility_second_derivative,
)
from .reputation import R_FLOOR, update_from_epsilon


def _random_instance(rng):
    ta = TimeAllocation(rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95))
    ch = ChannelSet(*rng.exponential(size=4) * rng.uniform(0.01, 1.0))
    return ta, SuConfig(rng.uniform(0.5, 20.0)), ch


def check_secrecy_example() -> bool:
    from .game import PowerAllocation

    r = secrecy_rate(
        TimeAllocation(0.5, 0.5), PowerAllocation(0.0, 2.0, 1.4),
        ChannelSet(4.0, 3.0, 1.0, 0.2), GameParams(p_p=3.0),
    )
    hand = 0.25 * math.log2(7.0) - 0.25 * math.log2(1.0 + 0.4 / 1.28)
    return abs(r - hand) < 1e-12


def check_energy_identity(rng, n=200) -> bool:
    gp = GameParams()
    for _ in range(n):
        ta, su, _ = _random_instance(rng)
        p_s = rng.uniform(0.0, su.p_max / (1.0 - ta.beta))
        pw = dependent_powers(p_s, ta, su, gp)
        if abs(pw.energy(ta.beta) - su.p_max) > 1e-9 * su.p_max:
            return False
    return True


def check_curvature(rng, n=50) -> bool:
    gp = GameParams()
    for _ in range(n):
        ta, su, ch = _random_instance(rng)
        hi = float(_feasible_upper(ta.beta, su.p_max, ch, gp))
        p = rng.uniform(0.1, 0.9) * hi
        h = 1e-4 * su.p_max
        fd = (su_utility(p + h, ta, su, ch, gp) - 2 * su_utility(p, ta, su, ch, gp)
              + su_utility(p - h, ta, su, ch, gp)) / h**2
        an = utility_second_derivative(p, ta, su, ch, gp)
        if not an < 0 or abs(fd - an) > 1e-3 * abs(an):
            return False
    return True


def check_best_response(rng, n=30) -> bool:
    gp = GameParams()
    for _ in range(n):
        ta, su, ch = _random_instance(rng)
        hi = float(_feasible_upper(ta.beta, su.p_max, ch, gp))
        grid = np.linspace(0.0, hi, 2001)
        best = max(su_utility(p, ta, su, ch, gp) for p in grid)
        _, u = su_best_response(ta, su, ch, gp)
        if u < best - 1e-3 * max(abs(best), 1e-12):
            return False
    return True


def check_reputation(rng, n=2000) -> bool:
    r = R_FLOOR
    for _ in range(n):
        eps = float(rng.choice([0.0, math.inf, rng.lognormal(0.0, 3.0)]))
        r = update_from_epsilon(r, eps, 0.1)
        if not R_FLOOR <= r <= 1.0:
            return False
    return update_from_epsilon(0.5, 1.0, 0.1) == 0.5 and update_from_epsilon(0.9, 0.0, 0.1) == R_FLOOR


def run(seed: int = 0) -> list[tuple[str, bool]]:
    rng = np.random.default_rng(seed)
    return [
        ("secrecy rate hand example", check_secrecy_example()),
        ("energy identity", check_energy_identity(rng)),
        ("second derivative vs finite difference", check_curvature(rng)),
        ("golden section vs grid", check_best_response(rng)),
        ("reputation bounds", check_reputation(rng)),
    ]
