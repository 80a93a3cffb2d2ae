"""Material electrical properties keyed by name, frequency band and environment."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from raycal.exceptions import AmbiguousMaterial, MissingMaterial
from raycal.types import InteractionKind

logger = logging.getLogger("raycal.materials")

# Frequencies are matched exactly after rounding to this many decimals (GHz).
_FREQ_DECIMALS = 6

LossKey = Tuple[str, InteractionKind]


def _freq_key(frequency: float) -> float:
    return round(float(frequency), _FREQ_DECIMALS)


@dataclass(frozen=True)
class Material:
    """Constant (angle-independent) losses of one material in one band.

    A loss of ``None`` means that interaction type was never calibrated.
    """

    name: str
    frequency: float  # GHz
    reflection_loss: Optional[float] = None  # dB
    penetration_loss: Optional[float] = None  # dB
    scattering_coefficient: float = 0.0
    scattering_lobe_exponent: float = 4.0
    environment: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("material name must be non-empty")
        if not (math.isfinite(self.frequency) and self.frequency > 0):
            raise ValueError(f"{self.name}: frequency must be positive, got {self.frequency!r}")
        for label, value in (("reflection_loss", self.reflection_loss), ("penetration_loss", self.penetration_loss)):
            if value is not None and not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{self.name}: {label} must be finite and >= 0, got {value!r}")
        if not 0.0 <= self.scattering_coefficient <= 1.0:
            raise ValueError(f"{self.name}: scattering_coefficient must be in [0, 1]")
        if not self.scattering_lobe_exponent >= 1.0:
            raise ValueError(f"{self.name}: scattering_lobe_exponent must be >= 1")

    def loss(self, kind: InteractionKind) -> Optional[float]:
        if kind == InteractionKind.REFLECTION:
            return self.reflection_loss
        if kind == InteractionKind.PENETRATION:
            return self.penetration_loss
        raise ValueError(f"no constant loss for {kind.value}")


class MaterialLibrary:
    """Immutable collection of materials.

    Entries are unique per (name, frequency, environment). A library used for
    simulation should hold one environment row per (name, frequency); lookups
    that would need an environment to disambiguate raise ``AmbiguousMaterial``.
    """

    def __init__(self, entries: Iterable[Material] = ()) -> None:
        self._entries: Tuple[Material, ...] = tuple(entries)
        index: Dict[Tuple[str, float], List[Material]] = {}
        for m in self._entries:
            bucket = index.setdefault((m.name, _freq_key(m.frequency)), [])
            if any(other.environment == m.environment for other in bucket):
                raise ValueError(f"duplicate material entry {m.name!r} at {m.frequency:g} GHz ({m.environment})")
            bucket.append(m)
        self._index = index

    @property
    def entries(self) -> Tuple[Material, ...]:
        return self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[Material]:
        return iter(self._entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MaterialLibrary) and self._entries == other._entries

    def __repr__(self) -> str:
        return f"MaterialLibrary({len(self._entries)} entries)"

    @cached_property
    def frequencies(self) -> List[float]:
        return sorted({m.frequency for m in self._entries})

    @cached_property
    def environments(self) -> List[str]:
        return sorted({m.environment for m in self._entries if m.environment})

    def lookup(self, name: str, frequency: float, environment: Optional[str] = None) -> Material:
        """Exact (name, frequency) match; no interpolation across bands."""
        bucket = self._index.get((name, _freq_key(frequency)), [])
        if environment is not None:
            bucket = [m for m in bucket if m.environment == environment]
        if not bucket:
            raise MissingMaterial(name, frequency, environment)
        if len(bucket) > 1:
            raise AmbiguousMaterial(name, frequency, [m.environment or "" for m in bucket])
        return bucket[0]

    def has(self, name: str, frequency: float) -> bool:
        return (name, _freq_key(frequency)) in self._index

    def for_environment(self, environment: str) -> "MaterialLibrary":
        """Rows tagged *environment* plus untagged rows."""
        return MaterialLibrary(m for m in self._entries if m.environment in (environment, None))

    def at_frequency(self, frequency: float) -> "MaterialLibrary":
        key = _freq_key(frequency)
        return MaterialLibrary(m for m in self._entries if _freq_key(m.frequency) == key)

    def merged(self, other: "MaterialLibrary") -> "MaterialLibrary":
        """Entries of *other* replace same-key entries of this library."""
        keys = {(m.name, _freq_key(m.frequency), m.environment) for m in other}
        kept = [m for m in self._entries if (m.name, _freq_key(m.frequency), m.environment) not in keys]
        return MaterialLibrary(kept + list(other))

    def validate_for(self, material_ids: Sequence[str], frequency: float) -> None:
        """Raise MissingMaterial for the first material id that does not resolve."""
        for name in sorted(set(material_ids)):
            self.lookup(name, frequency)

    def with_placeholder_losses(self, loss: float = 1.0) -> "MaterialLibrary":
        """Copy with every absent loss set to *loss* (used for ranking candidate paths)."""
        return MaterialLibrary(
            replace(
                m,
                reflection_loss=loss if m.reflection_loss is None else m.reflection_loss,
                penetration_loss=loss if m.penetration_loss is None else m.penetration_loss,
            )
            for m in self._entries
        )

    def with_losses(self, frequency: float, estimates: Mapping[LossKey, float]) -> "MaterialLibrary":
        """Copy with calibrated losses written into the rows at *frequency*.

        Materials estimated but absent from the library are added as new rows.
        Negative estimates are clamped to zero since a stored loss must be >= 0.
        """
        key = _freq_key(frequency)
        updated: List[Material] = []
        present = set()
        for m in self._entries:
            if _freq_key(m.frequency) == key:
                present.add(m.name)
                m = replace(m, **_loss_fields(m.name, estimates))
            updated.append(m)
        for name in sorted({n for n, _ in estimates} - present):
            updated.append(Material(name=name, frequency=frequency, **_loss_fields(name, estimates)))
        return MaterialLibrary(updated)

    @classmethod
    def placeholder(cls, names: Iterable[str], frequency: float, loss: float = 1.0) -> "MaterialLibrary":
        """Unit-loss library for loss-independent (geometry only) tracing."""
        return cls(
            Material(name=n, frequency=frequency, reflection_loss=loss, penetration_loss=loss) for n in sorted(set(names))
        )


def _loss_fields(name: str, estimates: Mapping[LossKey, float]) -> Dict[str, float]:
    fields: Dict[str, float] = {}
    for kind, attr in ((InteractionKind.PENETRATION, "penetration_loss"), (InteractionKind.REFLECTION, "reflection_loss")):
        if (name, kind) in estimates:
            fields[attr] = _stored_loss(name, kind, estimates[(name, kind)])
    return fields


def _stored_loss(name: str, kind: InteractionKind, value: float) -> float:
    if value < 0.0:
        logger.warning("Negative %s loss estimate %.3f dB for %s stored as 0 dB", kind.value, value, name)
        return 0.0
    return float(value)


def lookup(lib: MaterialLibrary, name: str, frequency: float) -> Material:
    """Exact (name, frequency) lookup; raises MissingMaterial when absent."""
    return lib.lookup(name, frequency)
