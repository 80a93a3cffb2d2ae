"""Directional measurements and their attribution to traced paths."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from raycal.channel import AntennaPattern, GaussianPattern, IsotropicPattern, fspl, time_of_flight
from raycal.channel.antenna import boresight_offset
from raycal.exceptions import MissingMaterial
from raycal.materials import MaterialLibrary
from raycal.types import Angles, InteractionKind, Point3, PropagationPath

logger = logging.getLogger("raycal.calibration")

# Stand-in loss (dB) for interactions the ranking library cannot price.
PLACEHOLDER_LOSS = 1.0

GATE_NO_PATHS = "no_paths"
GATE_ANGLE = "angle"
GATE_TOF = "tof"


@dataclass(frozen=True)
class DirectionalMeasurement:
    """Strongest MPC of one directional (TX pointing, RX pointing) record."""

    id: str
    tx: Point3
    rx: Point3
    frequency: float  # GHz
    ptx: float  # dBm
    tx_pointing: Angles
    rx_pointing: Angles
    tx_gain: float  # dBi at boresight
    rx_gain: float
    measured_power: float  # dBm
    measured_tof: Optional[float] = None  # ns
    tx_hpbw: Optional[float] = None  # degrees
    rx_hpbw: Optional[float] = None
    floor_db: float = field(default=-20.0, compare=False)

    def __post_init__(self) -> None:
        if not math.isfinite(self.measured_power):
            raise ValueError(f"measurement {self.id}: measured power must be finite")

    @property
    def tx_pattern(self) -> AntennaPattern:
        return _pattern(self.tx_gain, self.tx_hpbw, self.floor_db)

    @property
    def rx_pattern(self) -> AntennaPattern:
        return _pattern(self.rx_gain, self.rx_hpbw, self.floor_db)

    def gains(self, path: PropagationPath) -> float:
        """G_T + G_R evaluated along the path's departure and arrival directions."""
        return self.tx_pattern.gain(self.tx_pointing, path.aod) + self.rx_pattern.gain(self.rx_pointing, path.aoa)


def _pattern(gain: float, hpbw: Optional[float], floor_db: float) -> AntennaPattern:
    if hpbw is None or hpbw <= 0:
        return IsotropicPattern(gain)
    return GaussianPattern(gain, hpbw, hpbw, floor_db)


@dataclass(frozen=True)
class MatchGates:
    """Acceptance windows: delay in ns, per-side off-boresight angle in degrees (None disables)."""

    tof_ns: Optional[float] = None
    tx_angle_deg: Optional[float] = None
    rx_angle_deg: Optional[float] = None

    @classmethod
    def for_measurement(cls, m: DirectionalMeasurement, bandwidth_ghz: float, angle_deg: Optional[float] = None) -> "MatchGates":
        """One delay bin and half of each antenna's HPBW, unless *angle_deg* overrides both."""
        tx_gate = angle_deg if angle_deg is not None else (m.tx_hpbw / 2.0 if m.tx_hpbw else None)
        rx_gate = angle_deg if angle_deg is not None else (m.rx_hpbw / 2.0 if m.rx_hpbw else None)
        return cls(tof_ns=1.0 / bandwidth_ghz, tx_angle_deg=tx_gate, rx_angle_deg=rx_gate)


def angular_offset(pointing: Angles, direction: Angles) -> float:
    """Great-circle angle in degrees between a pointing and a direction."""
    d_az, d_el = boresight_offset(pointing, direction)
    az, el = math.radians(d_az), math.radians(d_el)
    return math.degrees(math.acos(max(-1.0, min(1.0, math.cos(az) * math.cos(el)))))


def _ranking_loss(path: PropagationPath, lib: Optional[MaterialLibrary], frequency: float) -> float:
    total = 0.0
    for inter in path.interactions:
        loss = None
        if lib is not None:
            try:
                loss = lib.lookup(inter.material_id, frequency).loss(inter.kind)
            except MissingMaterial:
                loss = None
        total += PLACEHOLDER_LOSS if loss is None else loss
    return total


def modeled_power(m: DirectionalMeasurement, path: PropagationPath, lib: Optional[MaterialLibrary] = None) -> float:
    """Predicted received power of *path* under *m*'s pointings, pricing unknown losses at 1 dB."""
    return m.ptx + m.gains(path) - fspl(path.path_length, m.frequency) - _ranking_loss(path, lib, m.frequency)


def screen_paths(
    m: DirectionalMeasurement, paths: Sequence[PropagationPath], gates: MatchGates
) -> Tuple[List[PropagationPath], Optional[str]]:
    """Paths passing every gate, plus the gate that rejected everything when none do."""
    specular = [p for p in paths if p.n_scatter == 0]
    if not specular:
        return [], GATE_NO_PATHS
    in_beam = [
        p
        for p in specular
        if (gates.tx_angle_deg is None or angular_offset(m.tx_pointing, p.aod) <= gates.tx_angle_deg)
        and (gates.rx_angle_deg is None or angular_offset(m.rx_pointing, p.aoa) <= gates.rx_angle_deg)
    ]
    if not in_beam:
        return [], GATE_ANGLE
    if m.measured_tof is None or gates.tof_ns is None:
        return in_beam, None
    in_time = [p for p in in_beam if abs(time_of_flight(p.path_length) - m.measured_tof) <= gates.tof_ns]
    return in_time, (None if in_time else GATE_TOF)


def match_measurement(
    m: DirectionalMeasurement,
    paths: Sequence[PropagationPath],
    gates: MatchGates,
    lib: Optional[MaterialLibrary] = None,
) -> Optional[PropagationPath]:
    """The gated path with the highest modeled directional power, or None.

    Scattering paths never match. Ties go to the shorter path.
    """
    qualified, _ = screen_paths(m, paths, gates)
    if not qualified:
        return None
    return min(qualified, key=lambda p: (-modeled_power(m, p, lib), p.path_length, p.path_id))


def interaction_counts(path: PropagationPath) -> List[Tuple[str, InteractionKind]]:
    return [(i.material_id, i.kind) for i in path.interactions if i.kind != InteractionKind.SCATTERING]
