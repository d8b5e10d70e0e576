"""Cooperative mmWave MIMO user association and hybrid beamforming simulator."""

from .association import Association, channel_gain_metric, exhaustive_match, \
    stable_match
from .channel import ChannelSet, Scenario, ScenarioConfig, array_response, \
    generate_channel, generate_scenario, pathloss_db
from .harness import BcdConfig, PowerModel, RunConfig, bcd_solve, \
    hardware_power, run_sweep, write_csv
from .manifold import QuadraticObjective, RcgConfig, rcg_minimize
from .objective import BeamformerState, fp_objective, sinr, update_rho, \
    update_xi, weighted_sum_rate

__all__ = [
    "Association", "BcdConfig", "BeamformerState", "ChannelSet", "PowerModel",
    "QuadraticObjective", "RcgConfig", "RunConfig", "Scenario",
    "ScenarioConfig", "array_response", "bcd_solve", "channel_gain_metric",
    "exhaustive_match", "fp_objective", "generate_channel",
    "generate_scenario", "hardware_power", "pathloss_db", "rcg_minimize",
    "run_sweep", "sinr", "stable_match", "update_rho", "update_xi",
    "weighted_sum_rate", "write_csv",
]

__version__ = "0.1.0"
