"""Exact ray/segment queries against facets: intersection, mirroring, obstruction."""

from __future__ import annotations

from typing import AbstractSet, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from raycal.geometry.facet import GEOMETRIC_TOLERANCE, EnvironmentMap, Facet, Hit, Ray, Side
from raycal.types import Point3, as_point

# Below this |d·n| a ray is treated as parallel to the facet plane.
_PARALLEL = 1e-15
_PARALLEL_NORMALS = 1e-12


class Obstruction(NamedTuple):
    facet_id: str
    material_id: str
    point: Point3
    t: float


def ray_facet_intersect(ray: Ray, facet: Facet) -> Optional[Hit]:
    """Intersection of *ray* with the interior of *facet*, or None.

    ``side`` is FRONT when the ray travels against the facet normal.
    """
    d = np.asarray(ray.direction)
    o = np.asarray(ray.origin)
    denom = float(d @ facet.normal)
    if abs(denom) < _PARALLEL:
        return None
    t = float((facet.origin - o) @ facet.normal) / denom
    if t <= GEOMETRIC_TOLERANCE:
        return None
    point = o + t * d
    if not facet.contains(point):
        return None
    return Hit(point=as_point(point), distance=t, side=Side.FRONT if denom < 0 else Side.BACK)


def mirror_point(point: Sequence[float], facet: Facet) -> Point3:
    """Reflection of *point* across the facet's supporting plane."""
    p = np.asarray(point, dtype=float)
    n = facet.normal
    return as_point(p - 2.0 * float((p - facet.origin) @ n) * n)


def segment_obstructions(
    a: Sequence[float],
    b: Sequence[float],
    env: EnvironmentMap,
    exclude: AbstractSet[str] = frozenset(),
) -> List[Obstruction]:
    """Facets whose interior is crossed strictly between *a* and *b*, ordered from *a*."""
    pa = np.asarray(a, dtype=float)
    pb = np.asarray(b, dtype=float)
    d = pb - pa
    if not np.any(d):
        raise ValueError("segment endpoints must differ")
    lo = np.minimum(pa, pb) - GEOMETRIC_TOLERANCE
    hi = np.maximum(pa, pb) + GEOMETRIC_TOLERANCE
    hits: List[Tuple[Obstruction, Facet]] = []
    for facet in env.facets:
        if facet.facet_id in exclude:
            continue
        f_lo, f_hi = facet.bounds
        if np.any(f_hi < lo) or np.any(f_lo > hi):
            continue
        denom = float(d @ facet.normal)
        if abs(denom) < _PARALLEL:
            continue
        t = float((facet.origin - pa) @ facet.normal) / denom
        if not (GEOMETRIC_TOLERANCE < t < 1.0 - GEOMETRIC_TOLERANCE):
            continue
        point = pa + t * d
        if facet.contains(point):
            hits.append((Obstruction(facet.facet_id, facet.material_id, as_point(point), t), facet))
    hits.sort(key=lambda h: (h[0].t, h[0].facet_id))

    # A crossing on the shared edge of coplanar facets is one crossing.
    found: List[Obstruction] = []
    kept: List[Facet] = []
    for obstruction, facet in hits:
        if found and _same_crossing(found[-1], kept[-1], obstruction, facet):
            continue
        found.append(obstruction)
        kept.append(facet)
    return found


def _same_crossing(a: Obstruction, fa: Facet, b: Obstruction, fb: Facet) -> bool:
    close = float(np.linalg.norm(np.subtract(a.point, b.point))) <= GEOMETRIC_TOLERANCE
    return close and abs(float(fa.normal @ fb.normal)) >= 1.0 - _PARALLEL_NORMALS
