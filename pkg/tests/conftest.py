import numpy as np
import pytest

from spectra_lease.channel import ChannelSet
from spectra_lease.game import GameParams, SuConfig, TimeAllocation, secrecy_feasible


def random_instance(rng, feasible=False):
    """A plausible (TimeAllocation, SuConfig, ChannelSet): Rayleigh gains at 2-30 m."""
    while True:
        ta = TimeAllocation(rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95))
        d = rng.uniform(2.0, 30.0, size=4)
        ch = ChannelSet(*(rng.exponential(size=4) / d**2))
        if not feasible or secrecy_feasible(ch):
            return ta, SuConfig(rng.uniform(1.0, 20.0)), ch


@pytest.fixture
def gp():
    return GameParams()


@pytest.fixture
def rng():
    return np.random.default_rng(20180102)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
