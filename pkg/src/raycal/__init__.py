"""raycal: mmWave/sub-THz ray tracing with least-squares material loss calibration."""

from raycal.calibration import CalibrationResult, DirectionalMeasurement, calibrate
from raycal.channel import LinkBudget, fspl, path_power, synthesize_pdp
from raycal.exceptions import (
    AmbiguousMaterial,
    CalibrationError,
    GeometryError,
    InputError,
    MissingMaterial,
    NumericalFailure,
    RaycalError,
    UncalibratedInteraction,
)
from raycal.geometry import EnvironmentMap, Facet
from raycal.materials import Material, MaterialLibrary, reference_library
from raycal.tracer import image_method_exhaustive, trace_paths
from raycal.types import Interaction, InteractionKind, MultipathComponent, PropagationPath

__version__ = "0.1.0"

__all__ = [
    "AmbiguousMaterial",
    "CalibrationError",
    "CalibrationResult",
    "DirectionalMeasurement",
    "EnvironmentMap",
    "Facet",
    "GeometryError",
    "InputError",
    "Interaction",
    "InteractionKind",
    "LinkBudget",
    "Material",
    "MaterialLibrary",
    "MissingMaterial",
    "MultipathComponent",
    "NumericalFailure",
    "PropagationPath",
    "RaycalError",
    "UncalibratedInteraction",
    "calibrate",
    "fspl",
    "image_method_exhaustive",
    "path_power",
    "reference_library",
    "synthesize_pdp",
    "trace_paths",
]
