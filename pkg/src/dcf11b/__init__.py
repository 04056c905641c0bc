"""Throughput model and simulator for the IEEE 802.11b DCF.

The package couples a per-station backoff-chain model (collisions plus
channel-error failures, saturated or Poisson traffic, four DSSS/CCK rate
classes) with a slot-time decomposition, solves the resulting fixed point
for the cell operating point and aggregate throughput, and cross-validates
the predictions with a seeded discrete-event simulator of the 2-way
basic-access MAC.
"""
from .params import (
    ChannelModel,
    DistanceChannel,
    FixedPer,
    FrameLayout,
    IdealChannel,
    Modulation,
    NetworkParams,
    PropagationParams,
    RATE_CLASSES,
    RateClassSpec,
    Scenario,
    StationConfig,
)
from .markov import StationChainState, chain_state
from .phy import (
    BracketError,
    UnsupportedModulationError,
    ber,
    frame_error_rate,
    per_at_distance,
    rate_switch_distance,
    received_snr_db,
    snr_per_bit_db,
)
from .timing import SlotBreakdown, slot_breakdown
from .solver import (
    ConvergenceError,
    NumericalError,
    OperatingPoint,
    SolverOptions,
    ThroughputReport,
    aggregate_throughput,
    critical_rate,
    in_region_d,
    linear_model,
    solve_operating_point,
    sweep,
)
from .sim import BatchReport, SimReport, batch, run
from .scenario_io import (
    ScenarioBundle,
    ScenarioFormatError,
    SimOptions,
    dump_scenario_text,
    parse_scenario_file,
    parse_scenario_text,
)
from . import presets

__version__ = "0.1.0"

__all__ = [
    "BatchReport",
    "BracketError",
    "ChannelModel",
    "ConvergenceError",
    "DistanceChannel",
    "FixedPer",
    "FrameLayout",
    "IdealChannel",
    "Modulation",
    "NetworkParams",
    "NumericalError",
    "OperatingPoint",
    "PropagationParams",
    "RATE_CLASSES",
    "RateClassSpec",
    "Scenario",
    "ScenarioBundle",
    "ScenarioFormatError",
    "SimOptions",
    "SimReport",
    "SlotBreakdown",
    "SolverOptions",
    "StationChainState",
    "StationConfig",
    "ThroughputReport",
    "UnsupportedModulationError",
    "aggregate_throughput",
    "batch",
    "ber",
    "chain_state",
    "critical_rate",
    "dump_scenario_text",
    "frame_error_rate",
    "in_region_d",
    "linear_model",
    "parse_scenario_file",
    "parse_scenario_text",
    "per_at_distance",
    "presets",
    "rate_switch_distance",
    "received_snr_db",
    "run",
    "slot_breakdown",
    "snr_per_bit_db",
    "solve_operating_point",
    "sweep",
]
