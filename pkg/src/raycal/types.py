"""Core data types shared across the tracer, channel and calibration layers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence, Tuple

Point3 = Tuple[float, float, float]
# (azimuth, elevation) in degrees
Angles = Tuple[float, float]


class InteractionKind(str, Enum):
    REFLECTION = "reflection"
    PENETRATION = "penetration"
    SCATTERING = "scattering"


@dataclass(frozen=True)
class Interaction:
    """A single event along a propagation path."""

    kind: InteractionKind
    facet_id: str
    material_id: str
    point: Point3
    # Degrees from the facet normal; diagnostics only, losses are angle-independent.
    incidence_angle: float = 0.0
    # Scattering only: angle between the specular and the scattered direction (degrees).
    rebound_angle: Optional[float] = None


def direction_angles(vector: Sequence[float]) -> Angles:
    """Azimuth/elevation in degrees of a 3-D direction (z-up, azimuth from +x toward +y)."""
    x, y, z = (float(c) for c in vector)
    az = math.degrees(math.atan2(y, x))
    el = math.degrees(math.atan2(z, math.hypot(x, y)))
    return (az, el)


@dataclass(frozen=True)
class PropagationPath:
    """A geometric TX→RX path and its ordered interactions."""

    tx: Point3
    rx: Point3
    interactions: Tuple[Interaction, ...]
    path_length: float
    aod: Angles
    aoa: Angles
    path_id: str = ""

    @classmethod
    def from_points(
        cls,
        tx: Sequence[float],
        rx: Sequence[float],
        interactions: Sequence[Interaction],
        path_id: str = "",
    ) -> "PropagationPath":
        """Build a path, deriving length and departure/arrival angles from its vertices."""
        tx_p = as_point(tx)
        rx_p = as_point(rx)
        vertices = [tx_p] + [i.point for i in interactions if i.kind != InteractionKind.PENETRATION] + [rx_p]
        length = sum(math.dist(a, b) for a, b in zip(vertices, vertices[1:]))
        first, last = vertices[1], vertices[-2]
        aod = direction_angles([first[k] - tx_p[k] for k in range(3)])
        aoa = direction_angles([last[k] - rx_p[k] for k in range(3)])
        return cls(tx=tx_p, rx=rx_p, interactions=tuple(interactions), path_length=length, aod=aod, aoa=aoa, path_id=path_id)

    def _count(self, kind: InteractionKind) -> int:
        return sum(1 for i in self.interactions if i.kind == kind)

    @property
    def n_reflections(self) -> int:
        return self._count(InteractionKind.REFLECTION)

    @property
    def n_penetrations(self) -> int:
        return self._count(InteractionKind.PENETRATION)

    @property
    def n_scatter(self) -> int:
        return self._count(InteractionKind.SCATTERING)

    @property
    def is_los(self) -> bool:
        """True when the path has no reflection or scattering bounce."""
        return self.n_reflections == 0 and self.n_scatter == 0

    @property
    def facet_sequence(self) -> Tuple[str, ...]:
        """Facet ids of the bounces (reflections and scattering), in travel order."""
        return tuple(i.facet_id for i in self.interactions if i.kind != InteractionKind.PENETRATION)

    @property
    def chain(self) -> str:
        """``material:kind`` tokens joined by ``;``."""
        return ";".join(f"{i.material_id}:{i.kind.value}" for i in self.interactions)

    def reversed(self) -> "PropagationPath":
        """The same path travelled RX→TX."""
        return replace(
            self,
            tx=self.rx,
            rx=self.tx,
            interactions=tuple(reversed(self.interactions)),
            aod=self.aoa,
            aoa=self.aod,
        )


@dataclass(frozen=True)
class MultipathComponent:
    """A resolvable arrival: received power, time of flight and angles."""

    power: float  # dBm
    tof: float  # ns
    aoa: Angles
    aod: Angles
    path: Optional[PropagationPath] = field(default=None, compare=False)

    @property
    def power_mw(self) -> float:
        return 10.0 ** (self.power / 10.0)


def as_point(p: Sequence[float]) -> Point3:
    """Coerce any 3-sequence into a ``Point3`` tuple of floats."""
    if len(p) != 3:
        raise ValueError(f"expected a 3-D point, got {len(p)} coordinates")
    return (float(p[0]), float(p[1]), float(p[2]))

