"""Image-method path construction: exact refinement of facet sequences and the exhaustive oracle."""

from __future__ import annotations

import itertools
import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from raycal.geometry import GEOMETRIC_TOLERANCE, EnvironmentMap, Facet, mirror_point, segment_obstructions
from raycal.materials import MaterialLibrary
from raycal.tracer.finalize import check_endpoints, finalize_paths, resolve_frequency
from raycal.types import Interaction, InteractionKind, PropagationPath

logger = logging.getLogger("raycal.tracer.image")

MAX_ORACLE_FACETS = 64
MAX_ORACLE_ORDER = 3
_PARALLEL = 1e-15


def incidence_angle(direction: np.ndarray, facet: Facet) -> float:
    """Angle in degrees between a travel direction and the facet normal line (0..90)."""
    d = direction / np.linalg.norm(direction)
    cos = abs(float(d @ facet.normal))
    sin = float(np.linalg.norm(np.cross(d, facet.normal)))
    return math.degrees(math.atan2(sin, cos))


def _back_trace(sequence: Sequence[Facet], tx: np.ndarray, rx: np.ndarray) -> Optional[List[np.ndarray]]:
    images = [tx]
    for facet in sequence:
        images.append(np.asarray(mirror_point(images[-1], facet)))
    points: List[np.ndarray] = []
    target = rx
    for k in range(len(sequence) - 1, -1, -1):
        facet = sequence[k]
        d = images[k + 1] - target
        denom = float(d @ facet.normal)
        if abs(denom) < _PARALLEL:
            return None
        s = float((facet.origin - target) @ facet.normal) / denom
        if not GEOMETRIC_TOLERANCE < s < 1.0 - GEOMETRIC_TOLERANCE:
            return None
        point = target + s * d
        if not facet.contains(point):
            return None
        points.append(point)
        target = point
    points.reverse()
    return points


def refine_path(
    sequence: Sequence[str],
    tx: Sequence[float],
    rx: Sequence[float],
    env: EnvironmentMap,
    max_penetrations: Optional[int] = None,
) -> Optional[PropagationPath]:
    """Exact specular path through the reflecting facets *sequence*, or None if infeasible.

    An empty sequence yields the direct path. Facets crossed along a segment become
    penetrations; crossing one of the reflecting facets invalidates the path.
    """
    facets = [env.facet(fid) for fid in sequence]
    if any(a.facet_id == b.facet_id for a, b in zip(facets, facets[1:])):
        return None
    tx_a = np.asarray(tx, dtype=float)
    rx_a = np.asarray(rx, dtype=float)
    points = _back_trace(facets, tx_a, rx_a)
    if points is None:
        return None
    vertices = [tx_a] + points + [rx_a]
    if any(np.linalg.norm(b - a) <= GEOMETRIC_TOLERANCE for a, b in zip(vertices, vertices[1:])):
        return None
    # Specular bounces need both neighbours strictly on the same side of the plane.
    for k, facet in enumerate(facets):
        before = facet.signed_distance(vertices[k])
        after = facet.signed_distance(vertices[k + 2])
        if before * after <= 0.0 or min(abs(before), abs(after)) <= GEOMETRIC_TOLERANCE:
            return None

    reflecting = {f.facet_id for f in facets}
    interactions: List[Interaction] = []
    n_pen = 0
    for k, (a, b) in enumerate(zip(vertices, vertices[1:])):
        ends = set()
        if k > 0:
            ends.add(facets[k - 1].facet_id)
        if k < len(facets):
            ends.add(facets[k].facet_id)
        direction = b - a
        for obs in segment_obstructions(a, b, env, exclude=ends):
            if obs.facet_id in reflecting:
                return None
            n_pen += 1
            interactions.append(
                Interaction(
                    kind=InteractionKind.PENETRATION,
                    facet_id=obs.facet_id,
                    material_id=obs.material_id,
                    point=obs.point,
                    incidence_angle=incidence_angle(direction, env.facet(obs.facet_id)),
                )
            )
        if k < len(facets):
            facet = facets[k]
            interactions.append(
                Interaction(
                    kind=InteractionKind.REFLECTION,
                    facet_id=facet.facet_id,
                    material_id=facet.material_id,
                    point=tuple(float(c) for c in b),
                    incidence_angle=incidence_angle(direction, facet),
                )
            )
    if max_penetrations is not None and n_pen > max_penetrations:
        return None
    return PropagationPath.from_points(tx_a, rx_a, interactions)


def reflection_sequences(facet_ids: Sequence[str], max_order: int):
    """Every ordered facet sequence up to *max_order* with no facet repeated back to back."""
    yield ()
    for order in range(1, max_order + 1):
        for seq in itertools.product(facet_ids, repeat=order):
            if all(a != b for a, b in zip(seq, seq[1:])):
                yield seq


def image_method_exhaustive(
    env: EnvironmentMap,
    lib: MaterialLibrary,
    tx: Sequence[float],
    rx: Sequence[float],
    max_order: int = 2,
    max_penetrations: int = 3,
    frequency_ghz: Optional[float] = None,
    strict_materials: bool = False,
) -> List[PropagationPath]:
    """Complete specular path set by brute-force enumeration; the reference for ``trace_paths``."""
    if len(env) > MAX_ORACLE_FACETS:
        raise ValueError(f"exhaustive image method is limited to {MAX_ORACLE_FACETS} facets, got {len(env)}")
    if not 0 <= max_order <= MAX_ORACLE_ORDER:
        raise ValueError(f"max_order must be in [0, {MAX_ORACLE_ORDER}], got {max_order}")
    tx_p, rx_p = check_endpoints(env, tx, rx)
    frequency = resolve_frequency(lib, frequency_ghz)
    ids = [f.facet_id for f in env.facets]
    paths = []
    for seq in reflection_sequences(ids, max_order):
        path = refine_path(seq, tx_p, rx_p, env, max_penetrations)
        if path is not None:
            paths.append(path)
    logger.debug("Exhaustive image method: %d feasible paths", len(paths), extra={"n_paths": len(paths)})
    return finalize_paths(paths, lib, frequency, strict=strict_materials)
