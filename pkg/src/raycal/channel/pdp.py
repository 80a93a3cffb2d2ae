"""Power delay profiles binned at the sounder's delay resolution."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from raycal.types import MultipathComponent

logger = logging.getLogger("raycal.channel.pdp")

DEFAULT_THRESHOLD_DB = 30.0


@dataclass(frozen=True)
class PowerDelayProfile:
    bin_width: float  # ns
    bins: Tuple[Tuple[float, float], ...]  # (delay ns, power mW), sorted by delay
    threshold: float = DEFAULT_THRESHOLD_DB

    @property
    def delays(self) -> List[float]:
        return [d for d, _ in self.bins]

    @property
    def powers_mw(self) -> List[float]:
        return [p for _, p in self.bins]

    @property
    def powers_dbm(self) -> List[float]:
        return [10.0 * math.log10(p) for _, p in self.bins]

    @property
    def total_power_mw(self) -> float:
        return math.fsum(self.powers_mw)

    @property
    def peak_dbm(self) -> float:
        return max(self.powers_dbm)


def synthesize_pdp(mpcs: Sequence[MultipathComponent], bandwidth_ghz: float, threshold_db: float = DEFAULT_THRESHOLD_DB) -> PowerDelayProfile:
    """Accumulate MPC powers (mW) into delay bins of width 1/bandwidth ns and apply the threshold."""
    if not mpcs:
        raise ValueError("cannot build a power delay profile from zero MPCs")
    if bandwidth_ghz <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_ghz}")
    width = 1.0 / bandwidth_ghz
    taps: Dict[int, List[float]] = {}
    for m in mpcs:
        taps.setdefault(int(math.floor(m.tof / width)), []).append(m.power_mw)
    summed = {k: math.fsum(v) for k, v in taps.items()}
    peak = max(summed.values())
    floor = peak * 10.0 ** (-threshold_db / 10.0)
    kept = tuple((k * width, p) for k, p in sorted(summed.items()) if p >= floor)
    if len(kept) < len(summed):
        logger.debug("PDP threshold dropped %d of %d bins", len(summed) - len(kept), len(summed))
    return PowerDelayProfile(bin_width=width, bins=kept, threshold=threshold_db)
