"""Time-slotted Monte Carlo runs of the leasing game.

Random streams are derived from the master seed with
``np.random.SeedSequence([seed, run, purpose])`` where ``purpose`` is 0 for
geometry and channels, 1 for relay selection and 2 for SU behaviour.  The
geometry/channel stream is consumed identically under every policy, so all
policies of one run face the same positions and fades.  Scenario 1 uses
``SeedSequence([seed, realization])`` for realization ``m`` at every sweep
distance (common random numbers across the sweep).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .channel import ChannelSet, Position, Topology, build_channels, uniform_in_annulus
from .game import (
    DEFAULT_GRID,
    GameParams,
    PowerAllocation,
    SuConfig,
    TimeAllocation,
    secrecy_feasible,
    secrecy_rate,
    stackelberg_solve,
)
from .reputation import ReputationTable
from .selection import SelectionPolicy, select

THREADS_ENV = "SPECTRA_LEASE_THREADS"
POLICIES = (SelectionPolicy.REPUTATION, SelectionPolicy.RANDOM, SelectionPolicy.BEST_CSI)


@dataclass(frozen=True)
class SuBehavior:
    kind: str = "reliable"
    deviation_prob: float = 0.0

    def __post_init__(self):
        if self.kind not in ("reliable", "selfish"):
            raise ValueError(f"unknown behaviour kind {self.kind!r}")
        if not 0.0 <= self.deviation_prob <= 1.0:
            raise ValueError("deviation_prob must lie in [0, 1]")
        if self.kind == "reliable" and self.deviation_prob != 0.0:
            raise ValueError("a reliable SU cannot deviate")

    @property
    def selfish(self) -> bool:
        return self.kind == "selfish"


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to reproduce a run.

    Geometry defaults are modelling choices, not published values.
    Scenario 1 keeps PT, PR, ST, SR fixed and moves ED to ``st + (d, 0)``.
    Scenario 2 redraws SU transmitters every slot: selfish ones uniformly in a
    disk of ``selfish_radius`` around PT, reliable ones in the annulus up to
    ``reliable_radius``; each SR sits ``sr_distance`` from its ST in a random
    direction and ED stays at ``ed``.
    """

    n_sus: int = 10
    selfish_fraction: float = 0.7
    deviation_prob: float = 0.2
    n_slots: int = 500
    n_runs: int = 20
    window: int = 50
    realizations: int = 500
    distances: tuple[float, ...] = (11.0, 14.0, 18.0, 24.0, 31.0, 40.0, 52.0, 67.0)
    p_max: float = 10.0
    seed: int = 1
    policy: str = "all"
    grid: int = DEFAULT_GRID
    pt: tuple[float, float] = (0.0, 0.0)
    pr: tuple[float, float] = (20.0, 0.0)
    st: tuple[float, float] = (10.0, 0.0)
    sr: tuple[float, float] = (10.0, 6.0)
    ed: tuple[float, float] = (10.0, 60.0)
    selfish_radius: float = 8.0
    reliable_radius: float = 16.0
    sr_distance: float = 6.0
    game: GameParams = field(default_factory=GameParams)

    def __post_init__(self):
        if self.n_sus < 1 or self.n_slots < 1 or self.n_runs < 1:
            raise ValueError("n_sus, n_slots and n_runs must be >= 1")
        if self.window < 1 or self.realizations < 1 or self.grid < 1:
            raise ValueError("window, realizations and grid must be >= 1")
        for name in ("selfish_fraction", "deviation_prob"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if not 0.0 < self.selfish_radius < self.reliable_radius:
            raise ValueError("need 0 < selfish_radius < reliable_radius")
        if self.policy != "all":
            SelectionPolicy(self.policy)
        if len(self.distances) == 0 or min(self.distances) <= 0:
            raise ValueError("distances must be a non-empty list of positive values")

    @property
    def su(self) -> SuConfig:
        return SuConfig(self.p_max)

    @property
    def n_selfish(self) -> int:
        return int(round(self.selfish_fraction * self.n_sus))

    def behaviors(self) -> list[SuBehavior]:
        """SU ids ``0 .. n_selfish-1`` are selfish, the rest reliable."""
        return [
            SuBehavior("selfish", self.deviation_prob) if i < self.n_selfish else SuBehavior()
            for i in range(self.n_sus)
        ]

    def policies(self) -> tuple[SelectionPolicy, ...]:
        return POLICIES if self.policy == "all" else (SelectionPolicy(self.policy),)


@dataclass(frozen=True)
class SlotOutcome:
    slot: int
    selected: Optional[int]
    selected_selfish: bool
    alpha_star: Optional[float]
    beta_star: Optional[float]
    declared: Optional[PowerAllocation]
    realized: Optional[PowerAllocation]
    deviated: bool
    secrecy_rate: float
    reputations: dict

    @property
    def leased(self) -> bool:
        return self.selected is not None


class Streams(NamedTuple):
    channel: np.random.Generator
    select: np.random.Generator
    behave: np.random.Generator


def run_streams(seed: int, run: int) -> Streams:
    return Streams(*(np.random.default_rng(np.random.SeedSequence([seed, run, k])) for k in range(3)))


def apply_behavior(
    behavior: SuBehavior,
    declared: PowerAllocation,
    ta: TimeAllocation,
    su: SuConfig,
    rng: np.random.Generator,
) -> tuple[PowerAllocation, bool]:
    """Realised powers: a deviating SU pours its whole budget into ``p_s``."""
    if not behavior.selfish or behavior.deviation_prob == 0.0:
        return declared, False
    if rng.random() < behavior.deviation_prob:
        return PowerAllocation(su.p_max / (1.0 - ta.beta), 0.0, 0.0), True
    return declared, False


@dataclass
class SlotState:
    """Mutable per-run state; the reputation table persists across slots."""

    topology: Topology
    behaviors: Sequence[SuBehavior]
    table: ReputationTable
    policy: SelectionPolicy
    su: SuConfig
    game: GameParams
    grid: int = DEFAULT_GRID


def run_slot(state: SlotState, slot: int, streams: Streams) -> SlotOutcome:
    """Play one round: fade, filter, select, solve, behave, observe."""
    channels = build_channels(state.topology, streams.channel)
    feasible = [i for i, ch in enumerate(channels) if secrecy_feasible(ch)]
    if not feasible:
        return SlotOutcome(slot, None, False, None, None, None, None, False, 0.0, state.table.snapshot())
    sel = select(state.policy, feasible, channels, state.table, streams.select)
    ch = channels[sel]
    sol = stackelberg_solve(state.su, ch, state.game, state.grid)
    ta = sol.time_allocation
    behavior = state.behaviors[sel]
    realized, deviated = apply_behavior(behavior, sol.powers, ta, state.su, streams.behave)
    rate = secrecy_rate(ta, realized, ch, state.game)
    state.table.observe(sel, realized, ch, state.game.eta3)
    return SlotOutcome(
        slot=slot,
        selected=sel,
        selected_selfish=behavior.selfish,
        alpha_star=ta.alpha,
        beta_star=ta.beta,
        declared=sol.powers,
        realized=realized,
        deviated=deviated,
        secrecy_rate=rate,
        reputations=state.table.snapshot(),
    )


def _workers() -> int:
    cap = os.environ.get(THREADS_ENV)
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def _map(fn: Callable, items: Sequence, workers: Optional[int] = None) -> list:
    workers = _workers() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))  # preserves input order


# -- scenario 1 -------------------------------------------------------------


def scenario1_topology(cfg: ScenarioConfig, distance: float) -> Topology:
    st = Position(*cfg.st)
    return Topology(
        pt=Position(*cfg.pt),
        pr=Position(*cfg.pr),
        ed=Position(st.x + distance, st.y),
        st=(st,),
        sr=(Position(*cfg.sr),),
    )


def _scenario1_realization(args) -> list[tuple[float, float, float, bool]]:
    cfg, m = args
    out = []
    for d in cfg.distances:
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, m]))
        (ch,) = build_channels(scenario1_topology(cfg, d), rng)
        sol = stackelberg_solve(cfg.su, ch, cfg.game, cfg.grid)
        if sol.leased:
            out.append((sol.secrecy_rate, sol.powers.p_j, sol.alpha_star * sol.beta_star, True))
        else:
            out.append((0.0, math.nan, math.nan, False))
    return out


def run_scenario1(cfg: ScenarioConfig, distances: Optional[Iterable[float]] = None) -> list[dict]:
    """Average single-SU Stackelberg outcomes over channel realizations.

    ``mean_secrecy_rate`` averages over all realizations (no lease counts as
    zero); jamming power and cooperation time are averaged over the
    realizations in which the PU actually leased.
    """
    if distances is not None:
        cfg = replace(cfg, distances=tuple(float(d) for d in distances))
    per_real = _map(_scenario1_realization, [(cfg, m) for m in range(cfg.realizations)])
    arr = np.array([[row[:3] for row in r] for r in per_real])  # (M, D, 3)
    leased = np.array([[row[3] for row in r] for r in per_real])
    rows = []
    for k, d in enumerate(cfg.distances):
        mask = leased[:, k]
        rows.append(
            {
                "distance_m": float(d),
                "mean_secrecy_rate": float(np.mean(arr[:, k, 0])),
                "mean_p_j_mw": float(np.mean(arr[mask, k, 1])) if mask.any() else math.nan,
                "mean_alpha_beta": float(np.mean(arr[mask, k, 2])) if mask.any() else math.nan,
                "lease_fraction": float(np.mean(mask)),
            }
        )
    return rows


# -- scenario 2 -------------------------------------------------------------


def scenario2_topology(cfg: ScenarioConfig, behaviors: Sequence[SuBehavior], rng) -> Topology:
    """Redraw SU pairs: selfish ones near PT, reliable ones farther out."""
    pt = Position(*cfg.pt)
    st, sr = [], []
    for b in behaviors:
        if b.selfish:
            p = uniform_in_annulus(pt, 0.0, cfg.selfish_radius, rng)
        else:
            p = uniform_in_annulus(pt, cfg.selfish_radius, cfg.reliable_radius, rng)
        theta = rng.uniform(0.0, 2.0 * np.pi)
        st.append(p)
        sr.append(Position(p.x + cfg.sr_distance * np.cos(theta), p.y + cfg.sr_distance * np.sin(theta)))
    return Topology(Position(*cfg.pt), Position(*cfg.pr), Position(*cfg.ed), tuple(st), tuple(sr))


def run_policy(cfg: ScenarioConfig, policy: SelectionPolicy, run: int) -> list[SlotOutcome]:
    """One independent run of ``cfg.n_slots`` slots under one policy."""
    streams = run_streams(cfg.seed, run)
    behaviors = cfg.behaviors()
    state = SlotState(
        topology=None,
        behaviors=behaviors,
        table=ReputationTable(range(cfg.n_sus)),
        policy=SelectionPolicy(policy),
        su=cfg.su,
        game=cfg.game,
        grid=cfg.grid,
    )
    outcomes = []
    for slot in range(cfg.n_slots):
        state.topology = scenario2_topology(cfg, behaviors, streams.channel)
        outcomes.append(run_slot(state, slot, streams))
    return outcomes


def _selfish_flags(args) -> tuple[list[bool], list[bool]]:
    cfg, policy, run = args
    outs = run_policy(cfg, policy, run)
    return [o.leased for o in outs], [o.selected_selfish for o in outs]


def window_fractions(leased: np.ndarray, selfish: np.ndarray, window: int) -> list[tuple[int, float]]:
    """Per-window share of leased slots that went to a selfish SU.

    ``leased`` and ``selfish`` are (runs, slots) boolean arrays.  Windows are
    consecutive and non-overlapping; the last one may be shorter.  The share is
    computed per run and then averaged over runs that leased at least once in
    the window.
    """
    n_slots = leased.shape[1]
    out = []
    for start in range(0, n_slots, window):
        end = min(start + window, n_slots)
        n_leased = leased[:, start:end].sum(axis=1)
        n_selfish = (selfish[:, start:end] & leased[:, start:end]).sum(axis=1)
        ok = n_leased > 0
        frac = float(np.mean(n_selfish[ok] / n_leased[ok])) if ok.any() else math.nan
        out.append((end, frac))
    return out


def run_scenario2(cfg: ScenarioConfig) -> list[dict]:
    """Unreliable-selection probability over time, one series per policy."""
    jobs = [(cfg, p, r) for p in cfg.policies() for r in range(cfg.n_runs)]
    results = _map(_selfish_flags, jobs)
    rows = []
    for i, policy in enumerate(cfg.policies()):
        chunk = results[i * cfg.n_runs : (i + 1) * cfg.n_runs]
        leased = np.array([c[0] for c in chunk])
        selfish = np.array([c[1] for c in chunk])
        for end, frac in window_fractions(leased, selfish, cfg.window):
            rows.append({"window_end_slot": end, "policy": policy.value, "p_unreliable": frac})
    return rows
