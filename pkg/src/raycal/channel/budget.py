"""Link budget: free-space loss, interaction losses and received MPC power."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from scipy.constants import c as SPEED_OF_LIGHT

from raycal.channel.antenna import AntennaPattern, IsotropicPattern
from raycal.exceptions import UncalibratedInteraction
from raycal.materials import MaterialLibrary
from raycal.types import Angles, InteractionKind, MultipathComponent, PropagationPath

logger = logging.getLogger("raycal.channel")

_TINY = 1e-300


def fspl(distance_m: float, frequency_ghz: float) -> float:
    """Friis free-space path loss in dB."""
    if distance_m <= 0 or frequency_ghz <= 0:
        raise ValueError(f"fspl needs positive distance and frequency, got d={distance_m}, f={frequency_ghz}")
    return 20.0 * math.log10(4.0 * math.pi * distance_m * frequency_ghz * 1e9 / SPEED_OF_LIGHT)


def time_of_flight(path_length_m: float) -> float:
    """Propagation delay in ns."""
    return path_length_m / SPEED_OF_LIGHT * 1e9


def scattering_loss(coefficient: float, lobe_exponent: float, rebound_angle_deg: float) -> float:
    """Directive-lobe scattering loss in dB around the specular direction."""
    lobe = max((1.0 + math.cos(math.radians(rebound_angle_deg))) / 2.0, _TINY)
    return -20.0 * math.log10(coefficient) - 10.0 * lobe_exponent * math.log10(lobe)


def interaction_loss(path: PropagationPath, lib: MaterialLibrary, frequency_ghz: float) -> float:
    """Sum of the per-interaction losses (dB) along *path*."""
    total = 0.0
    for inter in path.interactions:
        material = lib.lookup(inter.material_id, frequency_ghz)
        if inter.kind == InteractionKind.SCATTERING:
            if material.scattering_coefficient <= 0.0:
                raise UncalibratedInteraction(inter.material_id, inter.kind.value, frequency_ghz)
            total += scattering_loss(material.scattering_coefficient, material.scattering_lobe_exponent, inter.rebound_angle or 0.0)
            continue
        loss = material.loss(inter.kind)
        if loss is None:
            raise UncalibratedInteraction(inter.material_id, inter.kind.value, frequency_ghz)
        total += loss
    return total


@dataclass(frozen=True)
class LinkBudget:
    """Transmit power, band and antenna patterns shared by every path of a link."""

    frequency_ghz: float
    ptx_dbm: float = 0.0
    tx_pattern: AntennaPattern = field(default_factory=IsotropicPattern)
    rx_pattern: AntennaPattern = field(default_factory=IsotropicPattern)

    def omnidirectional(self) -> "LinkBudget":
        return LinkBudget(self.frequency_ghz, self.ptx_dbm)


def path_power(
    path: PropagationPath,
    lib: MaterialLibrary,
    ptx: float,
    tx_pattern: AntennaPattern,
    tx_pointing: Angles,
    rx_pattern: AntennaPattern,
    rx_pointing: Angles,
    frequency_ghz: float,
) -> MultipathComponent:
    """Received power of one path: ptx + G_T + G_R - FSPL - interaction losses."""
    gains = tx_pattern.gain(tx_pointing, path.aod) + rx_pattern.gain(rx_pointing, path.aoa)
    power = ptx + gains - fspl(path.path_length, frequency_ghz) - interaction_loss(path, lib, frequency_ghz)
    return MultipathComponent(power=power, tof=time_of_flight(path.path_length), aoa=path.aoa, aod=path.aod, path=path)


def evaluate_paths(
    paths: Sequence[PropagationPath],
    lib: MaterialLibrary,
    budget: LinkBudget,
    tx_pointing: Angles = (0.0, 0.0),
    rx_pointing: Angles = (0.0, 0.0),
) -> List[MultipathComponent]:
    return [
        path_power(p, lib, budget.ptx_dbm, budget.tx_pattern, tx_pointing, budget.rx_pattern, rx_pointing, budget.frequency_ghz)
        for p in paths
    ]


def omnidirectional_mpcs(paths: Sequence[PropagationPath], lib: MaterialLibrary, frequency_ghz: float, ptx_dbm: float = 0.0) -> List[MultipathComponent]:
    """MPCs seen by isotropic 0 dBi antennas at both ends."""
    return evaluate_paths(paths, lib, LinkBudget(frequency_ghz, ptx_dbm))


def strongest(mpcs: Sequence[MultipathComponent]) -> Optional[MultipathComponent]:
    """Maximum-power MPC; ties go to the earlier arrival."""
    if not mpcs:
        return None
    return min(mpcs, key=lambda m: (-m.power, m.tof))


def strongest_directional_mpc(
    paths: Sequence[PropagationPath],
    lib: MaterialLibrary,
    budget: LinkBudget,
    tx_pointing: Angles,
    rx_pointing: Angles,
) -> MultipathComponent:
    if not paths:
        raise ValueError("no paths to evaluate")
    best = strongest(evaluate_paths(paths, lib, budget, tx_pointing, rx_pointing))
    assert best is not None
    return best
