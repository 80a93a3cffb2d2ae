"""Material library: constant reflection/penetration losses per band."""

from raycal.materials.library import Material, MaterialLibrary, lookup
from raycal.materials.reference import REFERENCE_ROWS, reference_library

__all__ = ["Material", "MaterialLibrary", "REFERENCE_ROWS", "lookup", "reference_library"]
