"""3-D environment geometry: facets, maps and exact queries."""

from raycal.geometry.facet import GEOMETRIC_TOLERANCE, EnvironmentMap, Facet, Hit, Ray, Side
from raycal.geometry.queries import Obstruction, mirror_point, ray_facet_intersect, segment_obstructions

__all__ = [
    "GEOMETRIC_TOLERANCE",
    "EnvironmentMap",
    "Facet",
    "Hit",
    "Obstruction",
    "Ray",
    "Side",
    "mirror_point",
    "ray_facet_intersect",
    "segment_obstructions",
]
