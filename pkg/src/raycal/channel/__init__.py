"""Link budget, antenna patterns and power delay profiles."""

from raycal.channel.antenna import AntennaPattern, GaussianPattern, IsotropicPattern, antenna_gain, boresight_offset, pattern_from_config
from raycal.channel.budget import (
    SPEED_OF_LIGHT,
    LinkBudget,
    evaluate_paths,
    fspl,
    interaction_loss,
    omnidirectional_mpcs,
    path_power,
    scattering_loss,
    strongest,
    strongest_directional_mpc,
    time_of_flight,
)
from raycal.channel.pdp import PowerDelayProfile, synthesize_pdp

__all__ = [
    "SPEED_OF_LIGHT",
    "AntennaPattern",
    "GaussianPattern",
    "IsotropicPattern",
    "LinkBudget",
    "PowerDelayProfile",
    "antenna_gain",
    "boresight_offset",
    "evaluate_paths",
    "fspl",
    "interaction_loss",
    "omnidirectional_mpcs",
    "path_power",
    "pattern_from_config",
    "scattering_loss",
    "strongest",
    "strongest_directional_mpc",
    "synthesize_pdp",
    "time_of_flight",
]
