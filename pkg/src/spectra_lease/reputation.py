"""Per-SU reputation kept by a primary user.

First-hand values move by ``eta3 * ln(eps)`` after each observed slot, where
``eps`` weighs the power an SU spent serving the PU against the power it kept
for itself.  Values live in ``[R_FLOOR, 1]``; newcomers start at the floor.
"""

from __future__ import annotations

import math
from typing import Hashable, Iterable, Mapping, MutableMapping, Sequence

from .channel import ChannelSet
from .game import PowerAllocation

R_FLOOR = 0.01


def _clamp(r: float) -> float:
    return min(max(r, R_FLOOR), 1.0)


def init_reputation() -> float:
    return R_FLOOR


def epsilon(pw: PowerAllocation, ch: ChannelSet) -> float:
    """Channel-weighted service-to-self power ratio.

    Returns ``inf`` when the SU serves the PU but sends nothing of its own,
    and 1.0 (neutral) when it does neither.
    """
    num = pw.p_j * ch.g_se + pw.p_c * ch.g_sp
    den = pw.p_s * ch.g_ss
    if den == 0.0:
        return math.inf if num > 0.0 else 1.0
    return num / den


def first_hand_update(r_prev: float, pw: PowerAllocation, ch: ChannelSet, eta3: float) -> float:
    return update_from_epsilon(r_prev, epsilon(pw, ch), eta3)


def update_from_epsilon(r_prev: float, eps: float, eta3: float) -> float:
    if not R_FLOOR <= r_prev <= 1.0:
        raise ValueError(f"reputation {r_prev} outside [{R_FLOOR}, 1]")
    if eps <= 0.0:
        return R_FLOOR
    if math.isinf(eps):
        return 1.0
    return _clamp(r_prev + eta3 * math.log(eps))


def second_hand(neighbor_reps: Sequence[float]) -> float:
    """Mean of the values reported by neighbouring PUs (floor if none)."""
    if len(neighbor_reps) == 0:
        return init_reputation()
    return math.fsum(neighbor_reps) / len(neighbor_reps)


class ReputationTable(MutableMapping):
    """SU id -> reputation, clamped to ``[R_FLOOR, 1]`` on every write.

    Looking up an unknown SU registers it at the floor.
    """

    def __init__(self, ids: Iterable[Hashable] = ()):
        self._r: dict = {}
        for i in ids:
            self._r[i] = init_reputation()

    def __getitem__(self, su_id):
        if su_id not in self._r:
            self._r[su_id] = init_reputation()
        return self._r[su_id]

    def __setitem__(self, su_id, value: float):
        self._r[su_id] = _clamp(float(value))

    def __delitem__(self, su_id):
        del self._r[su_id]

    def __iter__(self):
        return iter(self._r)

    def __len__(self):
        return len(self._r)

    def __repr__(self):
        return f"ReputationTable({self._r!r})"

    def observe(self, su_id, pw: PowerAllocation, ch: ChannelSet, eta3: float) -> float:
        """Apply a first-hand update from realised powers; returns the new value."""
        self._r[su_id] = first_hand_update(self[su_id], pw, ch, eta3)
        return self._r[su_id]

    def adopt_second_hand(self, su_id, neighbours: Sequence[Mapping]) -> float:
        """Seed ``su_id`` from neighbouring PUs' tables that know it."""
        reps = [t[su_id] for t in neighbours if su_id in t]
        self[su_id] = second_hand(reps)
        return self._r[su_id]

    def snapshot(self) -> dict:
        return dict(self._r)
