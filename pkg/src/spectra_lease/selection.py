"""Relay-selection policies compared in the multi-SU scenario."""

from __future__ import annotations

import enum
from typing import Hashable, Mapping, Sequence

import numpy as np

from .channel import ChannelSet


class NoCandidateError(LookupError):
    pass


class SelectionPolicy(str, enum.Enum):
    REPUTATION = "reputation"
    RANDOM = "random"
    BEST_CSI = "best_csi"


def select_reputation(table: Mapping[Hashable, float], rng: np.random.Generator):
    """Most reputable SU; ties are broken uniformly at random."""
    if not table:
        raise NoCandidateError("empty reputation table")
    ids = list(table)
    values = np.array([table[i] for i in ids])
    tied = np.flatnonzero(values == values.max())
    return ids[tied[0]] if tied.size == 1 else ids[int(rng.choice(tied))]


def select_random(candidates: Sequence[Hashable], rng: np.random.Generator):
    if len(candidates) == 0:
        raise NoCandidateError("no candidates")
    return candidates[int(rng.integers(len(candidates)))]


def select_best_csi(channels: Sequence[ChannelSet]) -> int:
    """Index of the SU with the strongest PT -> ST gain (lowest index on ties)."""
    if len(channels) == 0:
        raise NoCandidateError("no candidates")
    return int(np.argmax([c.g_ps for c in channels]))


def select(
    policy: SelectionPolicy,
    candidates: Sequence[int],
    channels: Sequence[ChannelSet],
    table: Mapping[int, float],
    rng: np.random.Generator,
) -> int:
    """Apply ``policy`` to the candidate SU ids.

    ``channels`` is indexed by SU id; ``table`` may hold non-candidates too.
    """
    if len(candidates) == 0:
        raise NoCandidateError("no candidates")
    policy = SelectionPolicy(policy)
    if policy is SelectionPolicy.REPUTATION:
        return select_reputation({i: table[i] for i in candidates}, rng)
    if policy is SelectionPolicy.RANDOM:
        return select_random(list(candidates), rng)
    k = select_best_csi([channels[i] for i in candidates])
    return candidates[k]
