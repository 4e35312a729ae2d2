"""Secrecy rate, secondary-user utility and the leader/follower solver.

The primary user (leader) picks the time split ``(alpha, beta)`` of a slot of
length ``T``:

* phase I, ``(1 - alpha) T``: PT broadcasts to the secondary transmitter;
* phase II, ``alpha beta T``: the SU relays with ``p_c`` and jams with ``p_j``;
* phase III, ``alpha (1 - beta) T``: the SU sends its own data with ``p_s``.

The selected SU (follower) spends its whole energy budget,
``beta (p_c + p_j) + (1 - beta) p_s = p_max`` with ``p_j = rho p_c``, so its
strategy reduces to the single scalar ``p_s``.  The utility is strictly concave
in ``p_s`` and the best response is found by golden-section search.  The
leader anticipates that response over a uniform ``(alpha, beta)`` grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .channel import ChannelSet

LN2 = math.log(2.0)
LN_ARG_MIN = 1e-12  # margin on the reputation-term argument of the utility
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
DEFAULT_GRID = 99


class InfeasibleError(ValueError):
    """The requested SU operating point lies outside the feasible set."""


@dataclass(frozen=True)
class GameParams:
    p_p: float = 3.0  # mW
    sigma2: float = 1.0  # mW
    rho: float = 0.7
    eta1: float = 0.004
    eta2: float = 0.0005
    eta3: float = 0.1
    t_slot: float = 1.0

    def __post_init__(self):
        positive = ("p_p", "sigma2", "rho", "eta3", "t_slot")
        for name in positive:
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("eta1", "eta2"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class TimeAllocation:
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")


@dataclass(frozen=True)
class PowerAllocation:
    p_s: float
    p_c: float
    p_j: float

    def __post_init__(self):
        for name in ("p_s", "p_c", "p_j"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    def energy(self, beta: float) -> float:
        """Per-slot average power ``beta (p_c + p_j) + (1 - beta) p_s``."""
        return beta * (self.p_c + self.p_j) + (1.0 - beta) * self.p_s


@dataclass(frozen=True)
class SuConfig:
    p_max: float = 10.0  # mW

    def __post_init__(self):
        if not self.p_max > 0:
            raise ValueError(f"p_max must be > 0, got {self.p_max}")


@dataclass(frozen=True)
class StackelbergSolution:
    """Outcome of one leader/follower game.

    When the channel cannot support a positive secrecy rate the PU does not
    lease: ``leased`` is False, the strategy fields are None and the rate is 0.
    """

    alpha_star: Optional[float]
    beta_star: Optional[float]
    p_s_star: Optional[float]
    powers: Optional[PowerAllocation]
    secrecy_rate: float
    su_utility: Optional[float]

    @property
    def leased(self) -> bool:
        return self.powers is not None

    @property
    def time_allocation(self) -> Optional[TimeAllocation]:
        if not self.leased:
            return None
        return TimeAllocation(self.alpha_star, self.beta_star)

    @classmethod
    def no_lease(cls) -> "StackelbergSolution":
        return cls(None, None, None, None, 0.0, None)


def _log2_1p(x):
    return np.log1p(x) / LN2


# -- secrecy rate -----------------------------------------------------------


def _secrecy_rate_arr(alpha, beta, p_c, p_j, ch: ChannelSet, gp: GameParams):
    t = gp.t_slot
    first_hop = (1.0 - alpha) * t * _log2_1p(gp.p_p * ch.g_ps / gp.sigma2)
    second_hop = alpha * beta * t * _log2_1p(p_c * ch.g_sp / gp.sigma2)
    leak = alpha * beta * t * _log2_1p(p_c * ch.g_se / (gp.sigma2 + p_j * ch.g_se))
    return np.maximum(np.minimum(first_hop, second_hop) - leak, 0.0)


def secrecy_rate(
    ta: TimeAllocation, pw: PowerAllocation, ch: ChannelSet, gp: GameParams
) -> float:
    """Decode-and-forward secrecy rate of the primary link, clamped at zero."""
    return float(_secrecy_rate_arr(ta.alpha, ta.beta, pw.p_c, pw.p_j, ch, gp))


def secrecy_feasible(ch: ChannelSet) -> bool:
    """True when both legitimate links beat the eavesdropper link."""
    return ch.g_ps > ch.g_se and ch.g_sp > ch.g_se


# -- follower ---------------------------------------------------------------


def _relay_power(p_s, beta, p_max, rho):
    return (p_max - (1.0 - beta) * p_s) / (beta * (1.0 + rho))


def dependent_powers(
    p_s: float, ta: TimeAllocation, su: SuConfig, gp: GameParams
) -> PowerAllocation:
    """Relay and jamming powers implied by ``p_s`` under the energy equality."""
    upper = su.p_max / (1.0 - ta.beta)
    if not 0.0 <= p_s <= upper * (1.0 + 1e-12):
        raise InfeasibleError(f"p_s={p_s} outside [0, {upper}]")
    p_s = min(float(p_s), upper)
    p_c = max(float(_relay_power(p_s, ta.beta, su.p_max, gp.rho)), 0.0)
    return PowerAllocation(p_s, p_c, gp.rho * p_c)


def _ln_arg(p_s, beta, p_max, ch: ChannelSet, gp: GameParams):
    p_c = _relay_power(p_s, beta, p_max, gp.rho)
    p_j = gp.rho * p_c
    return p_j * ch.g_se + p_c * ch.g_sp - p_s * ch.g_ss + 1.0


def _utility_arr(p_s, alpha, beta, p_max, ch: ChannelSet, gp: GameParams):
    t = gp.t_slot
    p_c = _relay_power(p_s, beta, p_max, gp.rho)
    p_j = gp.rho * p_c
    own = alpha * (1.0 - beta) * t
    arg = p_j * ch.g_se + p_c * ch.g_sp - p_s * ch.g_ss + 1.0
    with np.errstate(invalid="ignore", divide="ignore"):
        rep = np.log(arg)
    return (
        own * _log2_1p(p_s * ch.g_ss / gp.sigma2)
        - gp.eta1 * own * p_s
        - gp.eta2 * alpha * beta * t * (p_c + p_j)
        + rep
    )


def _feasible_upper(beta, p_max, ch: ChannelSet, gp: GameParams):
    """Largest feasible ``p_s``: energy bound intersected with ln-arg > LN_ARG_MIN.

    The ln argument is affine and non-increasing in ``p_s`` and equals
    ``1 + (g_sp + rho g_se) p_max / (beta (1 + rho)) >= 1`` at ``p_s = 0``, so
    the feasible set is always an interval starting at zero.
    """
    energy_cap = p_max / (1.0 - beta)
    coef = (ch.g_sp + gp.rho * ch.g_se) / (beta * (1.0 + gp.rho))
    slope = coef * (1.0 - beta) + ch.g_ss
    at_zero = 1.0 + coef * p_max
    with np.errstate(divide="ignore"):
        ln_cap = np.where(slope > 0, (at_zero - LN_ARG_MIN) / np.where(slope > 0, slope, 1.0), np.inf)
    return np.minimum(energy_cap, ln_cap)


def _check_point(p_s: float, ta: TimeAllocation, su: SuConfig, ch, gp) -> None:
    upper = su.p_max / (1.0 - ta.beta)
    if not 0.0 <= p_s <= upper * (1.0 + 1e-12):
        raise InfeasibleError(f"p_s={p_s} outside [0, {upper}]")
    if not _ln_arg(p_s, ta.beta, su.p_max, ch, gp) > 0.0:
        raise InfeasibleError(f"reputation term undefined at p_s={p_s}")


def su_utility(
    p_s: float, ta: TimeAllocation, su: SuConfig, ch: ChannelSet, gp: GameParams
) -> float:
    """Utility of the selected SU as a function of its own-transmission power.

    Raises InfeasibleError when ``p_s`` breaks the energy budget or makes the
    logarithmic reputation term undefined.
    """
    _check_point(p_s, ta, su, ch, gp)
    return float(_utility_arr(p_s, ta.alpha, ta.beta, su.p_max, ch, gp))


def utility_second_derivative(
    p_s: float, ta: TimeAllocation, su: SuConfig, ch: ChannelSet, gp: GameParams
) -> float:
    """Closed-form d2U/dp_s2, using squared-magnitude gains throughout."""
    _check_point(p_s, ta, su, ch, gp)
    a, b, t = ta.alpha, ta.beta, gp.t_slot
    snr_gain = ch.g_ss / gp.sigma2
    rate_term = -a * (1.0 - b) * t / LN2 * snr_gain**2 / (1.0 + p_s * snr_gain) ** 2
    k = (1.0 - b) / (b * (1.0 + gp.rho))
    slope = -k * ch.g_sp - gp.rho * k * ch.g_se - ch.g_ss
    arg = _ln_arg(p_s, b, su.p_max, ch, gp)
    return float(rate_term - slope**2 / arg**2)


def golden_section_max(
    f: Callable[[np.ndarray], np.ndarray], lo, hi, tol: float
) -> np.ndarray:
    """Maximise a unimodal ``f`` on ``[lo, hi]`` (element-wise over arrays).

    ``lo`` and ``hi`` broadcast together; ``f`` must accept an array of that
    shape.  The bracket is shrunk until narrower than ``tol`` and the interior
    estimate is then compared against both endpoints.
    """
    a = np.array(lo, dtype=float, copy=True)
    b = np.array(hi, dtype=float, copy=True)
    a, b = np.broadcast_arrays(a, b)
    a, b = a.copy(), b.copy()
    # Per-element iteration counts keep each result independent of what else
    # shares the batch.
    width = b - a
    with np.errstate(divide="ignore", invalid="ignore"):
        n_iter = np.where(
            width > tol, np.ceil(np.log(tol / np.where(width > tol, width, 1.0)) / math.log(INV_PHI)), 0
        )
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for k in range(int(n_iter.max()) if n_iter.size else 0):
        active = k < n_iter
        left = fc >= fd  # maximiser lies in [a, d]
        nb = np.where(left, d, b)
        na = np.where(left, a, c)
        x = np.where(left, nb - INV_PHI * (nb - na), na + INV_PHI * (nb - na))
        fx = f(x)
        a, b = np.where(active, na, a), np.where(active, nb, b)
        nc, nd = np.where(left, x, d), np.where(left, c, x)
        nfc, nfd = np.where(left, fx, fd), np.where(left, fc, fx)
        c, d = np.where(active, nc, c), np.where(active, nd, d)
        fc, fd = np.where(active, nfc, fc), np.where(active, nfd, fd)
    mid = 0.5 * (a + b)
    lo_b, hi_b = np.broadcast_arrays(np.asarray(lo, float), np.asarray(hi, float))
    cands = np.stack([mid, lo_b, hi_b])
    vals = np.stack([f(mid), f(lo_b), f(hi_b)])
    vals = np.where(np.isnan(vals), -np.inf, vals)
    pick = np.argmax(vals, axis=0)
    return np.take_along_axis(cands, pick[None, ...], axis=0)[0]


def _utility_slope(p_s, alpha, beta, p_max, ch: ChannelSet, gp: GameParams):
    """dU/dp_s."""
    t = gp.t_slot
    own = alpha * (1.0 - beta) * t
    snr_gain = ch.g_ss / gp.sigma2
    k = (1.0 - beta) / (beta * (1.0 + gp.rho))
    arg_slope = -(k * (ch.g_sp + gp.rho * ch.g_se) + ch.g_ss)
    arg = _ln_arg(p_s, beta, p_max, ch, gp)
    return (
        own * snr_gain / (LN2 * (1.0 + p_s * snr_gain))
        - gp.eta1 * own
        + gp.eta2 * alpha * t * (1.0 - beta)
        + arg_slope / arg
    )


def _best_response_arr(alpha, beta, p_max, ch: ChannelSet, gp: GameParams):
    alpha, beta = np.broadcast_arrays(np.asarray(alpha, float), np.asarray(beta, float))
    hi = _feasible_upper(beta, p_max, ch, gp)
    # Concavity: a non-positive slope at zero pins the maximiser to zero, so
    # the search only runs where the optimum can be interior.
    search = _utility_slope(0.0, alpha, beta, p_max, ch, gp) > 0.0
    p_s = np.zeros_like(hi)
    if np.any(search):
        a, b = alpha[search], beta[search]
        p_s[search] = golden_section_max(
            lambda p: _utility_arr(p, a, b, p_max, ch, gp),
            np.zeros_like(hi[search]),
            hi[search],
            1e-6 * p_max,
        )
    return p_s


def su_best_response(
    ta: TimeAllocation, su: SuConfig, ch: ChannelSet, gp: GameParams
) -> tuple[float, float]:
    """Utility-maximising ``p_s`` of the selected SU and the utility it attains."""
    hi = float(_feasible_upper(ta.beta, su.p_max, ch, gp))
    if not hi >= 0.0:
        raise InfeasibleError("empty feasible interval")
    p_s = float(_best_response_arr(ta.alpha, ta.beta, su.p_max, ch, gp))
    return p_s, su_utility(p_s, ta, su, ch, gp)


# -- leader -----------------------------------------------------------------


@lru_cache(maxsize=8)
def leader_grid(grid: int) -> tuple[np.ndarray, np.ndarray]:
    """Flattened ``(alpha, beta)`` grid, alpha-major, excluding 0 and 1."""
    axis = np.arange(1, grid + 1) / (grid + 1)
    alpha, beta = np.meshgrid(axis, axis, indexing="ij")
    alpha, beta = alpha.ravel(), beta.ravel()
    alpha.setflags(write=False)
    beta.setflags(write=False)
    return alpha, beta


def _leader_values(idx, alpha, beta, su: SuConfig, ch, gp):
    a, b = alpha[idx], beta[idx]
    p_s = _best_response_arr(a, b, su.p_max, ch, gp)
    p_c = np.maximum(_relay_power(p_s, b, su.p_max, gp.rho), 0.0)
    return _secrecy_rate_arr(a, b, p_c, gp.rho * p_c, ch, gp)


def _rate_upper_bound(alpha, beta, su: SuConfig, ch, gp):
    # Relay rate grows and leakage grows with p_c, so pair the largest relay
    # power (p_s = 0) with the smallest one (p_s at the feasible cap).
    t = gp.t_slot
    pc_max = su.p_max / (beta * (1.0 + gp.rho))
    hi = _feasible_upper(beta, su.p_max, ch, gp)
    pc_min = np.maximum(_relay_power(hi, beta, su.p_max, gp.rho), 0.0)
    first_hop = (1.0 - alpha) * t * _log2_1p(gp.p_p * ch.g_ps / gp.sigma2)
    second_hop = alpha * beta * t * _log2_1p(pc_max * ch.g_sp / gp.sigma2)
    leak = alpha * beta * t * _log2_1p(
        pc_min * ch.g_se / (gp.sigma2 + gp.rho * pc_min * ch.g_se)
    )
    return np.maximum(np.minimum(first_hop, second_hop) - leak, 0.0)


def leader_rates(
    su: SuConfig, ch: ChannelSet, gp: GameParams, grid: int = DEFAULT_GRID, prune: bool = True
) -> np.ndarray:
    """Anticipated secrecy rate at every leader grid point (alpha-major).

    With ``prune`` the exact follower solve is skipped at points whose rate
    upper bound is already below the best exact rate found; those entries are
    NaN.  The argmax over the result is the same either way.
    """
    alpha, beta = leader_grid(grid)
    n = alpha.size
    if not prune:
        return _leader_values(np.arange(n), alpha, beta, su, ch, gp)
    ub = _rate_upper_bound(alpha, beta, su, ch, gp)
    order = np.argsort(-ub, kind="stable")
    rates = np.full(n, np.nan)
    best = -np.inf
    start, chunk = 0, 64
    while start < n:
        nxt = ub[order[start]]
        if nxt == 0.0 and best >= 0.0:
            rates[order[start:]] = 0.0  # 0 <= rate <= bound == 0
            break
        if nxt < best - 1e-9 * abs(best):
            break
        idx = order[start : start + chunk]
        rates[idx] = _leader_values(idx, alpha, beta, su, ch, gp)
        best = max(best, float(np.max(rates[idx])))
        start += chunk
        chunk *= 4
    return rates


def stackelberg_solve(
    su: SuConfig,
    ch: ChannelSet,
    gp: GameParams,
    grid: int = DEFAULT_GRID,
    prune: bool = True,
) -> StackelbergSolution:
    """Backward induction: the PU picks the grid point whose anticipated
    follower response yields the highest secrecy rate.

    Ties go to the smaller alpha, then the smaller beta.
    """
    if not secrecy_feasible(ch):
        return StackelbergSolution.no_lease()
    alpha, beta = leader_grid(grid)
    rates = leader_rates(su, ch, gp, grid, prune)
    k = int(np.argmax(np.where(np.isnan(rates), -np.inf, rates)))
    ta = TimeAllocation(float(alpha[k]), float(beta[k]))
    p_s, util = su_best_response(ta, su, ch, gp)
    powers = dependent_powers(p_s, ta, su, gp)
    return StackelbergSolution(
        alpha_star=ta.alpha,
        beta_star=ta.beta,
        p_s_star=p_s,
        powers=powers,
        secrecy_rate=secrecy_rate(ta, powers, ch, gp),
        su_utility=util,
    )
