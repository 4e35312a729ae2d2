"""Node geometry and Rayleigh-faded power gains.

Every link coefficient is drawn as ``h ~ CN(0, d**-2)`` so the expected power
gain of a link falls off with the square of its length.  Downstream code only
ever sees power gains ``|h|**2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

D_MIN = 0.1  # metres; d**-2 diverges below this


class GeometryError(ValueError):
    """Raised when two nodes are closer than ``D_MIN``."""


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def __post_init__(self):
        if not (np.isfinite(self.x) and np.isfinite(self.y)):
            raise GeometryError(f"non-finite position ({self.x}, {self.y})")

    def distance(self, other: "Position") -> float:
        return float(np.hypot(self.x - other.x, self.y - other.y))


@dataclass(frozen=True)
class ComplexGain:
    re: float
    im: float

    @property
    def power_gain(self) -> float:
        return self.re * self.re + self.im * self.im


@dataclass(frozen=True)
class ChannelSet:
    """Power gains seen by one secondary user.

    g_ps: PT -> ST_i, g_sp: ST_i -> PR, g_ss: ST_i -> SR_i, g_se: ST_i -> ED.
    """

    g_ps: float
    g_sp: float
    g_ss: float
    g_se: float

    def __post_init__(self):
        for name in ("g_ps", "g_sp", "g_ss", "g_se"):
            v = getattr(self, name)
            if not (v >= 0 and np.isfinite(v)):
                raise ValueError(f"{name} must be a finite non-negative gain, got {v}")


@dataclass(frozen=True)
class Topology:
    """Positions of the primary pair, the eavesdropper and every SU pair."""

    pt: Position
    pr: Position
    ed: Position
    st: tuple[Position, ...]
    sr: tuple[Position, ...]

    def __post_init__(self):
        if len(self.st) != len(self.sr):
            raise ValueError("st and sr must have one entry per secondary user")

    @property
    def n_sus(self) -> int:
        return len(self.st)


def _check_distance(distance: float) -> float:
    if not distance >= D_MIN:
        raise GeometryError(f"distance {distance!r} m is below D_MIN={D_MIN} m")
    return float(distance)


def sample_gain(distance: float, rng: np.random.Generator) -> ComplexGain:
    """Draw one coefficient from CN(0, distance**-2)."""
    d = _check_distance(distance)
    scale = np.sqrt(0.5) / d
    re, im = rng.normal(0.0, scale, size=2)
    return ComplexGain(float(re), float(im))


def link_distances(topo: Topology, i: int) -> tuple[float, float, float, float]:
    st = topo.st[i]
    return (
        topo.pt.distance(st),
        st.distance(topo.pr),
        st.distance(topo.sr[i]),
        st.distance(topo.ed),
    )


def build_channels(topo: Topology, rng: np.random.Generator) -> list[ChannelSet]:
    """Sample the four link gains for every secondary user in ``topo``.

    Links are drawn in SU order and, within an SU, in the order
    PT->ST, ST->PR, ST->SR, ST->ED, so a seeded stream is reproducible.
    """
    channels = []
    for i in range(topo.n_sus):
        gains = [sample_gain(d, rng).power_gain for d in link_distances(topo, i)]
        channels.append(ChannelSet(*gains))
    return channels


def uniform_in_annulus(
    center: Position, r_inner: float, r_outer: float, rng: np.random.Generator
) -> Position:
    """Uniform-by-area point in the annulus ``r_inner <= r <= r_outer``."""
    r_inner = max(r_inner, D_MIN)
    r = np.sqrt(rng.uniform(r_inner**2, r_outer**2))
    theta = rng.uniform(0.0, 2.0 * np.pi)
    return Position(center.x + r * np.cos(theta), center.y + r * np.sin(theta))


def positions_from(pairs: Sequence[Sequence[float]]) -> tuple[Position, ...]:
    return tuple(Position(float(x), float(y)) for x, y in pairs)
