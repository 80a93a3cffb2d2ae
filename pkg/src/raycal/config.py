"""Run configuration: environment-driven settings plus the JSON run file."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

from raycal.types import Angles, Point3

# Reflection order is capped here regardless of what a config asks for.
MAX_REFLECTION_ORDER = 5


@dataclass
class Settings:
    """Process-level settings loaded from environment."""

    log_format: str = "pretty"  # "json" or "pretty"
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> Settings:
        return cls(
            log_format=os.environ.get("RAYCAL_LOG_FORMAT", "pretty"),
            log_level=os.environ.get("RAYCAL_LOG_LEVEL", "INFO").upper(),
        )


@dataclass(frozen=True)
class TracerConfig:
    max_reflections: int = 5
    angular_spacing_deg: float = 0.5
    max_penetrations: int = 3
    scatter_grid_m: float = 0.25
    include_scattering: bool = True
    strict_materials: bool = False

    def __post_init__(self) -> None:
        if self.max_reflections < 0:
            raise ValueError(f"max_reflections must be >= 0, got {self.max_reflections}")
        if self.max_penetrations < 0:
            raise ValueError(f"max_penetrations must be >= 0, got {self.max_penetrations}")
        if not 0.05 <= self.angular_spacing_deg <= 10.0:
            raise ValueError(f"angular_spacing_deg must be in [0.05, 10], got {self.angular_spacing_deg}")
        if self.scatter_grid_m <= 0:
            raise ValueError(f"scatter_grid_m must be positive, got {self.scatter_grid_m}")

    @property
    def reflection_order(self) -> int:
        return min(self.max_reflections, MAX_REFLECTION_ORDER)


@dataclass(frozen=True)
class AntennaConfig:
    """Directional horn description; ``None`` everywhere means isotropic."""

    boresight_gain_dbi: float = 0.0
    hpbw_az_deg: Optional[float] = None
    hpbw_el_deg: Optional[float] = None
    floor_db: float = -20.0


@dataclass(frozen=True)
class LinkSpec:
    link_id: str
    tx: Point3
    rx: Point3
    tx_pointing: Optional[Angles] = None
    rx_pointing: Optional[Angles] = None


def default_bandwidth_ghz(frequency_ghz: float) -> float:
    """RF bandwidth of the sounder used for a band: 800 MHz at 28 GHz, 1 GHz above."""
    return 0.8 if frequency_ghz < 60.0 else 1.0


@dataclass
class RunConfig:
    """Everything a CLI command needs; loaded by ``raycal.formats.load_run_config``."""

    environment: Optional[str] = None
    materials: Optional[str] = None
    measurements: Optional[str] = None
    true_materials: Optional[str] = None
    frequency_ghz: float = 28.0
    bandwidth_ghz: Optional[float] = None
    ptx_dbm: float = 0.0
    tracer: TracerConfig = field(default_factory=TracerConfig)
    tx_antenna: Optional[AntennaConfig] = None
    rx_antenna: Optional[AntennaConfig] = None
    links: List[LinkSpec] = field(default_factory=list)
    pdp_threshold_db: float = 30.0
    output_dir: str = "out"
    seed: int = 0
    noise_sigma_db: float = 0.0
    base_dir: str = "."

    @property
    def effective_bandwidth_ghz(self) -> float:
        return self.bandwidth_ghz if self.bandwidth_ghz is not None else default_bandwidth_ghz(self.frequency_ghz)

    def resolve(self, path: Optional[str]) -> Optional[str]:
        """Resolve *path* relative to the directory of the config file."""
        if path is None or os.path.isabs(path):
            return path
        return os.path.join(self.base_dir, path)

    def with_overrides(self, overrides: Dict[str, Any], tracer_overrides: Dict[str, Any]) -> "RunConfig":
        """Copy with non-None CLI overrides applied."""
        top = {k: v for k, v in overrides.items() if v is not None}
        tr = {k: v for k, v in tracer_overrides.items() if v is not None}
        cfg = replace(self, **top)
        if tr:
            cfg = replace(cfg, tracer=replace(cfg.tracer, **tr))
        return cfg


def pointing_or_default(pointing: Optional[Tuple[float, float]]) -> Angles:
    return (0.0, 0.0) if pointing is None else (float(pointing[0]), float(pointing[1]))
