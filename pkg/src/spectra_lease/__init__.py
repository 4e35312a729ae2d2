"""Reputation-based Stackelberg spectrum leasing with cooperative jamming."""

__version__ = "0.1.0"

from .channel import ChannelSet, ComplexGain, Position, Topology, build_channels, sample_gain
from .game import (
    GameParams,
    InfeasibleError,
    PowerAllocation,
    StackelbergSolution,
    SuConfig,
    TimeAllocation,
    dependent_powers,
    secrecy_feasible,
    secrecy_rate,
    stackelberg_solve,
    su_best_response,
    su_utility,
    utility_second_derivative,
)
from .reputation import R_FLOOR, ReputationTable, epsilon, first_hand_update, init_reputation, second_hand
from .selection import SelectionPolicy, select_best_csi, select_random, select_reputation
from .sim import ScenarioConfig, SlotOutcome, SuBehavior, apply_behavior, run_scenario1, run_scenario2, run_slot
