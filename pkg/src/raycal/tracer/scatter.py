"""Single-bounce directive scattering from facets with a nonzero scattering coefficient."""

from __future__ import annotations

import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from raycal.exceptions import MissingMaterial
from raycal.geometry import GEOMETRIC_TOLERANCE, EnvironmentMap, Facet, segment_obstructions
from raycal.materials import MaterialLibrary
from raycal.tracer.finalize import FREQUENCY_REQUIRED, resolve_frequency
from raycal.tracer.image import incidence_angle
from raycal.types import Interaction, InteractionKind, PropagationPath

logger = logging.getLogger("raycal.tracer.scatter")


def facet_samples(facet: Facet, pitch: float) -> np.ndarray:
    """Centres of a square grid of cell size *pitch* laid over the facet, kept when inside it.

    The grid is aligned with the facet's first edge and anchored at the in-plane minimum corner.
    """
    if pitch <= 0:
        raise ValueError(f"scatter grid pitch must be positive, got {pitch}")
    u, w = facet.in_plane_basis()
    rel = facet.points - facet.origin
    a, b = rel @ u, rel @ w
    n_a = max(1, int(math.ceil((a.max() - a.min()) / pitch - 1e-9)))
    n_b = max(1, int(math.ceil((b.max() - b.min()) / pitch - 1e-9)))
    ca = a.min() + (np.arange(n_a) + 0.5) * pitch
    cb = b.min() + (np.arange(n_b) + 0.5) * pitch
    ga, gb = np.meshgrid(ca, cb, indexing="ij")
    pts = facet.origin + ga.reshape(-1, 1) * u + gb.reshape(-1, 1) * w
    return np.array([p for p in pts if facet.contains(p)]).reshape(-1, 3)


def rebound_angle(tx: np.ndarray, point: np.ndarray, rx: np.ndarray, facet: Facet) -> float:
    """Angle in degrees between the specular continuation at *point* and the direction to *rx*."""
    incoming = (point - tx) / np.linalg.norm(point - tx)
    specular = incoming - 2.0 * float(incoming @ facet.normal) * facet.normal
    outgoing = (rx - point) / np.linalg.norm(rx - point)
    return math.degrees(math.atan2(float(np.linalg.norm(np.cross(specular, outgoing))), float(specular @ outgoing)))


def _penetrations(a: np.ndarray, b: np.ndarray, env: EnvironmentMap, facet_id: str) -> List[Interaction]:
    direction = b - a
    return [
        Interaction(
            kind=InteractionKind.PENETRATION,
            facet_id=obs.facet_id,
            material_id=obs.material_id,
            point=obs.point,
            incidence_angle=incidence_angle(direction, env.facet(obs.facet_id)),
        )
        for obs in segment_obstructions(a, b, env, exclude={facet_id})
    ]


def scatter_paths(
    env: EnvironmentMap,
    lib: MaterialLibrary,
    tx: Sequence[float],
    rx: Sequence[float],
    grid_m: float = 0.25,
    max_penetrations: int = 3,
    frequency_ghz: Optional[float] = None,
) -> List[PropagationPath]:
    """tx -> sample -> rx paths over every scattering facet, in facet then grid order."""
    tx_a = np.asarray(tx, dtype=float)
    rx_a = np.asarray(rx, dtype=float)
    paths: List[PropagationPath] = []
    frequency = resolve_frequency(lib, frequency_ghz)
    if frequency is None:
        materials = {f.material_id for f in env.facets}
        if any(m.name in materials and m.scattering_coefficient > 0.0 for m in lib):
            raise ValueError(FREQUENCY_REQUIRED)
        return paths
    for facet in env.facets:
        try:
            material = lib.lookup(facet.material_id, frequency)
        except MissingMaterial:
            continue
        if material.scattering_coefficient <= 0.0:
            continue
        s_tx, s_rx = facet.signed_distance(tx_a), facet.signed_distance(rx_a)
        if s_tx * s_rx <= 0.0 or min(abs(s_tx), abs(s_rx)) <= GEOMETRIC_TOLERANCE:
            continue
        count = 0
        for point in facet_samples(facet, grid_m):
            first = _penetrations(tx_a, point, env, facet.facet_id)
            second = _penetrations(point, rx_a, env, facet.facet_id)
            if len(first) + len(second) > max_penetrations:
                continue
            bounce = Interaction(
                kind=InteractionKind.SCATTERING,
                facet_id=facet.facet_id,
                material_id=facet.material_id,
                point=tuple(float(c) for c in point),
                incidence_angle=incidence_angle(point - tx_a, facet),
                rebound_angle=rebound_angle(tx_a, point, rx_a, facet),
            )
            paths.append(PropagationPath.from_points(tx_a, rx_a, first + [bounce] + second))
            count += 1
        logger.debug("Facet %s: %d scatter paths", facet.facet_id, count, extra={"facet_id": facet.facet_id, "n_paths": count})
    return paths
