"""Secondary channel statistics: delay spread, angular spread and measured/simulated comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from raycal.channel import PowerDelayProfile
from raycal.types import MultipathComponent

# Circular spread of a uniform azimuth distribution; also the largest rms spread.
MAX_ANGULAR_SPREAD = 180.0 / math.sqrt(3.0)
# Resultant lengths this close to 1 are a single direction up to rounding.
_RESULTANT_EPS = 1e-12

METRICS = ("rms_delay_spread", "angular_spread_aoa", "angular_spread_aod")
SPREAD_DEFINITIONS = ("circular", "rms")


@dataclass(frozen=True)
class ChannelStats:
    location_id: str
    n_mpcs: int
    total_power: float  # dBm
    rms_delay_spread: float  # ns
    angular_spread_aoa: float  # degrees
    angular_spread_aod: float  # degrees


def _weights(mpcs: Sequence[MultipathComponent]) -> np.ndarray:
    if not mpcs:
        raise ValueError("statistics need at least one MPC")
    return np.array([m.power_mw for m in mpcs], dtype=float)


def _weighted_std(values: np.ndarray, weights: np.ndarray) -> float:
    mean = float(np.sum(weights * values) / np.sum(weights))
    return math.sqrt(max(float(np.sum(weights * (values - mean) ** 2) / np.sum(weights)), 0.0))


def rms_delay_spread(mpcs: Sequence[MultipathComponent]) -> float:
    """Power-weighted second central moment of the delays, ns."""
    p = _weights(mpcs)
    return _weighted_std(np.array([m.tof for m in mpcs], dtype=float), p)


def pdp_delay_spread(pdp: PowerDelayProfile) -> float:
    """Delay spread of a binned profile; differs from the MPC-based value by at most one bin."""
    if not pdp.bins:
        raise ValueError("empty power delay profile")
    return _weighted_std(np.array(pdp.delays), np.array(pdp.powers_mw))


def _azimuths(mpcs: Sequence[MultipathComponent], side: str) -> np.ndarray:
    if side not in ("aoa", "aod"):
        raise ValueError(f"side must be 'aoa' or 'aod', got {side!r}")
    return np.array([(m.aoa if side == "aoa" else m.aod)[0] for m in mpcs], dtype=float)


def angular_spread(mpcs: Sequence[MultipathComponent], side: str = "aoa", definition: str = "circular") -> float:
    """Azimuth spread in degrees.

    ``circular``: sqrt(-2 ln R) with R the normalized resultant length.
    ``rms``: power-weighted standard deviation, minimized over where the 360 degree wrap is cut.
    """
    p = _weights(mpcs)
    phi = _azimuths(mpcs, side)
    if definition == "circular":
        resultant = abs(complex(np.sum(p * np.exp(1j * np.radians(phi))))) / float(np.sum(p))
        if resultant <= 0.0:
            return MAX_ANGULAR_SPREAD
        if resultant >= 1.0 - _RESULTANT_EPS:
            return 0.0
        spread = math.degrees(math.sqrt(max(-2.0 * math.log(min(resultant, 1.0)), 0.0)))
        return min(spread, MAX_ANGULAR_SPREAD)
    if definition == "rms":
        wrapped = np.mod(phi, 360.0)
        return min(_weighted_std(np.mod(wrapped - cut, 360.0), p) for cut in wrapped)
    raise ValueError(f"unknown angular spread definition {definition!r}")


def channel_stats(mpcs: Sequence[MultipathComponent], location_id: str = "", definition: str = "circular") -> ChannelStats:
    p = _weights(mpcs)
    return ChannelStats(
        location_id=location_id,
        n_mpcs=len(mpcs),
        total_power=10.0 * math.log10(math.fsum(p)),
        rms_delay_spread=rms_delay_spread(mpcs),
        angular_spread_aoa=angular_spread(mpcs, "aoa", definition),
        angular_spread_aod=angular_spread(mpcs, "aod", definition),
    )


@dataclass(frozen=True)
class MetricError:
    mean_relative_error: float  # fraction; -0.2 means under-predicted by 20 %
    bias: float  # mean (sim - meas) in the metric's unit
    mean_absolute_error: float
    n_pairs: int


@dataclass(frozen=True)
class ComparisonRow:
    location_id: str
    metric: str
    measured: float
    simulated: float

    @property
    def relative_error(self) -> float:
        if self.measured == 0.0:
            return 0.0 if self.simulated == 0.0 else math.nan
        return (self.simulated - self.measured) / self.measured


@dataclass(frozen=True)
class Comparison:
    rows: List[ComparisonRow]
    metrics: Dict[str, MetricError]


def compare(measured: Sequence[ChannelStats], simulated: Sequence[ChannelStats]) -> Comparison:
    """Per-metric relative error, bias and absolute error of simulated against measured statistics."""
    if len(measured) != len(simulated):
        raise ValueError(f"cannot compare {len(measured)} measured with {len(simulated)} simulated locations")
    for a, b in zip(measured, simulated):
        if a.location_id != b.location_id:
            raise ValueError(f"location mismatch: measured {a.location_id!r} paired with simulated {b.location_id!r}")
    rows = [
        ComparisonRow(a.location_id, metric, float(getattr(a, metric)), float(getattr(b, metric)))
        for a, b in zip(measured, simulated)
        for metric in METRICS
    ]
    metrics: Dict[str, MetricError] = {}
    for metric in METRICS:
        picked = [r for r in rows if r.metric == metric]
        rel = [r.relative_error for r in picked if not math.isnan(r.relative_error)]
        diff = [r.simulated - r.measured for r in picked]
        metrics[metric] = MetricError(
            mean_relative_error=float(np.mean(rel)) if rel else math.nan,
            bias=float(np.mean(diff)) if diff else math.nan,
            mean_absolute_error=float(np.mean(np.abs(diff))) if diff else math.nan,
            n_pairs=len(picked),
        )
    return Comparison(rows=rows, metrics=metrics)
