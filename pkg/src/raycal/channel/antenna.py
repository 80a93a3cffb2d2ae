"""Antenna gain patterns."""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

from raycal.config import AntennaConfig
from raycal.types import Angles


def _unit(angles: Angles) -> Tuple[float, float, float]:
    az, el = math.radians(angles[0]), math.radians(angles[1])
    return (math.cos(el) * math.cos(az), math.cos(el) * math.sin(az), math.sin(el))


def boresight_offset(pointing: Angles, direction: Angles) -> Angles:
    """Azimuth/elevation of *direction* in a frame whose +x axis is *pointing* (degrees)."""
    x, y, z = _unit(direction)
    az_p, el_p = math.radians(pointing[0]), math.radians(pointing[1])
    # rotate by -azimuth about z, then level the pointing elevation about y
    x1 = x * math.cos(az_p) + y * math.sin(az_p)
    y1 = -x * math.sin(az_p) + y * math.cos(az_p)
    x2 = x1 * math.cos(el_p) + z * math.sin(el_p)
    z2 = -x1 * math.sin(el_p) + z * math.cos(el_p)
    return (math.degrees(math.atan2(y1, x2)), math.degrees(math.atan2(z2, math.hypot(x2, y1))))


class AntennaPattern(ABC):
    """Abstract base class for antenna gain patterns."""

    boresight_gain: float

    @abstractmethod
    def gain(self, pointing: Angles, direction: Angles) -> float:
        """Gain in dBi toward *direction* when the antenna is aimed at *pointing*."""

    @property
    def half_beamwidth(self) -> Optional[Angles]:
        """Half the (azimuth, elevation) HPBW, or None for an omnidirectional antenna."""
        return None


@dataclass(frozen=True)
class IsotropicPattern(AntennaPattern):
    boresight_gain: float = 0.0

    def gain(self, pointing: Angles, direction: Angles) -> float:
        return self.boresight_gain


@dataclass(frozen=True)
class GaussianPattern(AntennaPattern):
    """Gaussian main lobe parameterized by HPBW with a constant sidelobe floor.

    ``floor_db`` is relative to boresight; the main lobe drops 3 dB at half the
    HPBW along either axis.
    """

    boresight_gain: float
    hpbw_az: float
    hpbw_el: float
    floor_db: float = -20.0

    def __post_init__(self) -> None:
        if self.hpbw_az <= 0 or self.hpbw_el <= 0:
            raise ValueError(f"HPBW must be positive, got ({self.hpbw_az}, {self.hpbw_el})")
        if self.floor_db > 0:
            raise ValueError(f"floor_db must be <= 0, got {self.floor_db}")

    def gain(self, pointing: Angles, direction: Angles) -> float:
        d_az, d_el = boresight_offset(pointing, direction)
        rolloff = 12.0 * ((d_az / self.hpbw_az) ** 2 + (d_el / self.hpbw_el) ** 2)
        return self.boresight_gain - min(rolloff, -self.floor_db)

    @property
    def half_beamwidth(self) -> Optional[Angles]:
        return (self.hpbw_az / 2.0, self.hpbw_el / 2.0)


def antenna_gain(pattern: AntennaPattern, pointing: Angles, direction: Angles) -> float:
    return pattern.gain(pointing, direction)


def pattern_from_config(config: Optional[AntennaConfig]) -> AntennaPattern:
    """Gaussian horn when a beamwidth is configured, else isotropic at the configured gain."""
    if config is None:
        return IsotropicPattern()
    hpbw_az = config.hpbw_az_deg if config.hpbw_az_deg is not None else config.hpbw_el_deg
    hpbw_el = config.hpbw_el_deg if config.hpbw_el_deg is not None else config.hpbw_az_deg
    if hpbw_az is None or hpbw_el is None:
        return IsotropicPattern(config.boresight_gain_dbi)
    return GaussianPattern(config.boresight_gain_dbi, hpbw_az, hpbw_el, config.floor_db)
