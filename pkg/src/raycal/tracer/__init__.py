"""Path finding: launch directions, SBR search, image-method refinement and scattering."""

from raycal.tracer.engine import trace_paths
from raycal.tracer.image import image_method_exhaustive, refine_path
from raycal.tracer.launch import launch_directions, subdivision_level, tessellation_gap
from raycal.tracer.sbr import sbr_candidates
from raycal.tracer.scatter import facet_samples, scatter_paths

__all__ = [
    "facet_samples",
    "image_method_exhaustive",
    "launch_directions",
    "refine_path",
    "sbr_candidates",
    "scatter_paths",
    "subdivision_level",
    "tessellation_gap",
    "trace_paths",
]
