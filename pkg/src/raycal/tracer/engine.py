"""Hybrid tracer entry point: SBR candidate search refined by the image method."""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence

from raycal.config import TracerConfig
from raycal.geometry import EnvironmentMap
from raycal.materials import MaterialLibrary
from raycal.tracer.finalize import check_endpoints, finalize_paths, resolve_frequency
from raycal.tracer.image import refine_path
from raycal.tracer.sbr import sbr_candidates
from raycal.tracer.scatter import scatter_paths
from raycal.types import PropagationPath

logger = logging.getLogger("raycal.tracer")


def trace_paths(
    env: EnvironmentMap,
    lib: MaterialLibrary,
    tx: Sequence[float],
    rx: Sequence[float],
    config: Optional[TracerConfig] = None,
    frequency_ghz: Optional[float] = None,
) -> List[PropagationPath]:
    """All direct, specular and single-scatter paths from *tx* to *rx*, shortest first.

    *frequency_ghz* may be omitted when *lib* holds a single band.
    """
    config = config or TracerConfig()
    tx_p, rx_p = check_endpoints(env, tx, rx)
    frequency = resolve_frequency(lib, frequency_ghz)
    if config.strict_materials and len(env):
        if frequency is None:
            raise ValueError("frequency_ghz is required when the material library spans several bands")
        lib.validate_for(env.material_ids, frequency)

    candidates = sbr_candidates(
        env,
        tx_p,
        rx_p,
        max_reflections=config.reflection_order,
        max_penetrations=config.max_penetrations,
        angular_spacing_deg=config.angular_spacing_deg,
    )
    paths = []
    for seq in [()] + sorted(candidates):
        path = refine_path(seq, tx_p, rx_p, env, config.max_penetrations)
        if path is not None:
            paths.append(path)
    logger.debug("%d SBR candidates, %d refined", len(candidates), len(paths), extra={"n_paths": len(paths)})

    if config.include_scattering:
        paths.extend(
            scatter_paths(env, lib, tx_p, rx_p, grid_m=config.scatter_grid_m, max_penetrations=config.max_penetrations, frequency_ghz=frequency)
        )
    return finalize_paths(paths, lib, frequency, strict=config.strict_materials)
