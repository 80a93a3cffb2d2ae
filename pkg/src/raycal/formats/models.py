"""Pydantic schemas for the JSON documents raycal reads and writes."""

from __future__ import annotations

from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

Vec3 = Tuple[float, float, float]
Pair = Tuple[float, float]


class FacetDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(..., min_length=1)
    material: str = Field(..., min_length=1)
    vertices: List[Vec3] = Field(..., min_length=3)


class EnvironmentDoc(BaseModel):
    """Environment map file: facets in metres, right-handed, z-up."""

    model_config = ConfigDict(extra="forbid")

    name: str = ""
    materials_ref: Optional[str] = None
    facets: List[FacetDoc] = Field(default_factory=list)


class MaterialDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = Field(..., min_length=1)
    frequency_ghz: float = Field(..., gt=0)
    environment: Optional[str] = None
    reflection_loss_db: Optional[float] = Field(default=None, ge=0)
    penetration_loss_db: Optional[float] = Field(default=None, ge=0)
    scattering_coefficient: float = Field(default=0.0, ge=0.0, le=1.0)
    scattering_lobe_exponent: float = Field(default=4.0, ge=1.0)


class TracerDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    max_reflections: int = Field(default=5, ge=0)
    angular_spacing_deg: float = Field(default=0.5, ge=0.05, le=10.0)
    max_penetrations: int = Field(default=3, ge=0)
    scatter_grid_m: float = Field(default=0.25, gt=0)
    include_scattering: bool = True
    strict_materials: bool = False


class AntennaDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    boresight_gain_dbi: float = 0.0
    hpbw_az_deg: Optional[float] = Field(default=None, gt=0)
    hpbw_el_deg: Optional[float] = Field(default=None, gt=0)
    floor_db: float = Field(default=-20.0, le=0)


class LinkDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(..., min_length=1)
    tx: Vec3
    rx: Vec3
    tx_pointing: Optional[Pair] = None
    rx_pointing: Optional[Pair] = None


class RunConfigDoc(BaseModel):
    """Run configuration file; paths are relative to the file's directory."""

    model_config = ConfigDict(extra="forbid")

    environment: Optional[str] = None
    materials: Optional[str] = None
    measurements: Optional[str] = None
    true_materials: Optional[str] = None
    frequency_ghz: float = Field(default=28.0, gt=0)
    bandwidth_ghz: Optional[float] = Field(default=None, gt=0)
    ptx_dbm: float = 0.0
    tracer: TracerDoc = Field(default_factory=TracerDoc)
    tx_antenna: Optional[AntennaDoc] = None
    rx_antenna: Optional[AntennaDoc] = None
    links: List[LinkDoc] = Field(default_factory=list)
    pdp_threshold_db: float = Field(default=30.0, gt=0)
    output_dir: str = "out"
    seed: int = Field(default=0, ge=0, lt=2**64)
    noise_sigma_db: float = Field(default=0.0, ge=0)

    @field_validator("links")
    @classmethod
    def validate_unique_links(cls, v: List[LinkDoc]) -> List[LinkDoc]:
        ids = [link.id for link in v]
        if len(ids) != len(set(ids)):
            raise ValueError("link ids must be unique")
        return v
