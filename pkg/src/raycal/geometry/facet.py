"""Planar convex facets and the environment map built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from raycal.exceptions import GeometryError
from raycal.types import Point3, as_point

# Containment / self-intersection tolerance, metres.
GEOMETRIC_TOLERANCE = 1e-9
# Distance within which two facets count as touching, metres.
TOUCH_TOLERANCE = 1e-6
_MIN_AREA = 1e-12


class Side(str, Enum):
    FRONT = "front"
    BACK = "back"


@dataclass(frozen=True)
class Ray:
    origin: Point3
    direction: Point3

    def __post_init__(self) -> None:
        norm = float(np.linalg.norm(self.direction))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"ray direction must be a unit vector, |d| = {norm!r}")

    @classmethod
    def towards(cls, origin: Sequence[float], target: Sequence[float]) -> "Ray":
        o = np.asarray(origin, dtype=float)
        d = np.asarray(target, dtype=float) - o
        return cls.along(origin, d)

    @classmethod
    def along(cls, origin: Sequence[float], direction: Sequence[float]) -> "Ray":
        d = np.asarray(direction, dtype=float)
        n = float(np.linalg.norm(d))
        if n == 0.0:
            raise ValueError("ray direction must be nonzero")
        return cls(origin=as_point(origin), direction=as_point(d / n))


@dataclass(frozen=True)
class Hit:
    point: Point3
    distance: float
    side: Side


@dataclass(frozen=True)
class Facet:
    """A convex planar polygon with a material assignment.

    The unit normal follows the vertex winding (right-hand rule).
    """

    facet_id: str
    material_id: str
    vertices: Tuple[Point3, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(as_point(v) for v in self.vertices))
        if len(self.vertices) < 3:
            raise GeometryError(f"facet {self.facet_id!r} needs at least 3 vertices, got {len(self.vertices)}")
        pts = self.points
        if not np.all(np.isfinite(pts)):
            raise GeometryError(f"facet {self.facet_id!r} has non-finite coordinates")
        if self.area <= _MIN_AREA:
            raise GeometryError(f"facet {self.facet_id!r} is degenerate (area {self.area:.3e} m²)")
        offsets = (pts - pts[0]) @ self.normal
        if np.max(np.abs(offsets)) > GEOMETRIC_TOLERANCE:
            raise GeometryError(f"facet {self.facet_id!r} is not planar (max offset {np.max(np.abs(offsets)):.3e} m)")
        edges = np.roll(pts, -1, axis=0) - pts
        if np.any(np.linalg.norm(edges, axis=1) <= GEOMETRIC_TOLERANCE):
            raise GeometryError(f"facet {self.facet_id!r} has repeated vertices")
        turns = np.cross(np.roll(edges, 1, axis=0), edges) @ self.normal
        scale = np.linalg.norm(np.roll(edges, 1, axis=0), axis=1) * np.linalg.norm(edges, axis=1)
        if np.any(turns < -GEOMETRIC_TOLERANCE * scale):
            raise GeometryError(f"facet {self.facet_id!r} is not convex")

    @cached_property
    def points(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float)

    @cached_property
    def _newell(self) -> np.ndarray:
        pts = self.points
        nxt = np.roll(pts, -1, axis=0)
        return np.sum(np.cross(pts, nxt), axis=0)

    @cached_property
    def area(self) -> float:
        return 0.5 * float(np.linalg.norm(self._newell))

    @cached_property
    def normal(self) -> np.ndarray:
        n = self._newell
        return n / np.linalg.norm(n)

    @property
    def origin(self) -> np.ndarray:
        return self.points[0]

    @cached_property
    def edge_normals(self) -> np.ndarray:
        """Unit in-plane normals of each edge, pointing into the polygon."""
        edges = np.roll(self.points, -1, axis=0) - self.points
        inward = np.cross(self.normal, edges)
        return inward / np.linalg.norm(inward, axis=1, keepdims=True)

    @cached_property
    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.points.min(axis=0), self.points.max(axis=0)

    def signed_distance(self, point: Sequence[float]) -> float:
        return float((np.asarray(point, dtype=float) - self.origin) @ self.normal)

    def edge_clearance(self, point: Sequence[float]) -> float:
        """Smallest in-plane distance from *point* to an edge; negative outside the polygon."""
        rel = np.asarray(point, dtype=float) - self.points
        return float(np.min(np.sum(rel * self.edge_normals, axis=1)))

    def contains(self, point: Sequence[float], tolerance: float = GEOMETRIC_TOLERANCE) -> bool:
        """True when *point* (assumed on the plane) lies inside the polygon or on its boundary."""
        return self.edge_clearance(point) >= -tolerance

    def in_plane_basis(self) -> Tuple[np.ndarray, np.ndarray]:
        u = self.points[1] - self.points[0]
        u = u / np.linalg.norm(u)
        w = np.cross(self.normal, u)
        return u, w

    def touches(self, other: "Facet", tolerance: float = TOUCH_TOLERANCE) -> bool:
        """True when a vertex of either facet lies on the other's polygon."""
        return _vertex_on(self, other, tolerance) or _vertex_on(other, self, tolerance)


def _vertex_on(a: Facet, b: Facet, tolerance: float) -> bool:
    offsets = (a.points - b.origin) @ b.normal
    return any(abs(off) <= tolerance and b.contains(p, tolerance) for p, off in zip(a.points, offsets))


@dataclass(frozen=True)
class PackedFacets:
    """Facet data stacked into arrays for vectorized ray casting.

    Edge arrays are padded to the largest vertex count; ``edge_mask`` marks the
    real edges.
    """

    normals: np.ndarray  # (F, 3)
    origins: np.ndarray  # (F, 3)
    edge_points: np.ndarray  # (F, K, 3)
    edge_normals: np.ndarray  # (F, K, 3)
    edge_mask: np.ndarray  # (F, K)


@dataclass(frozen=True)
class EnvironmentMap:
    """The simulation world: a named set of facets."""

    name: str
    facets: Tuple[Facet, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "facets", tuple(self.facets))
        seen: Dict[str, int] = {}
        for f in self.facets:
            if f.facet_id in seen:
                raise GeometryError(f"duplicate facet id {f.facet_id!r}")
            seen[f.facet_id] = 1

    @cached_property
    def _index(self) -> Dict[str, Facet]:
        return {f.facet_id: f for f in self.facets}

    def facet(self, facet_id: str) -> Facet:
        return self._index[facet_id]

    def __len__(self) -> int:
        return len(self.facets)

    def __iter__(self) -> Iterator[Facet]:
        return iter(self.facets)

    @property
    def material_ids(self) -> List[str]:
        return sorted({f.material_id for f in self.facets})

    @cached_property
    def bounding_box(self) -> Optional[Tuple[Point3, Point3]]:
        if not self.facets:
            return None
        lo = np.min([f.bounds[0] for f in self.facets], axis=0)
        hi = np.max([f.bounds[1] for f in self.facets], axis=0)
        return as_point(lo), as_point(hi)

    @cached_property
    def packed(self) -> PackedFacets:
        n_facets = len(self.facets)
        k = max((len(f.vertices) for f in self.facets), default=3)
        normals = np.zeros((n_facets, 3))
        origins = np.zeros((n_facets, 3))
        edge_points = np.zeros((n_facets, k, 3))
        edge_normals = np.zeros((n_facets, k, 3))
        edge_mask = np.zeros((n_facets, k), dtype=bool)
        for i, f in enumerate(self.facets):
            nv = len(f.vertices)
            normals[i] = f.normal
            origins[i] = f.origin
            edge_points[i, :nv] = f.points
            edge_normals[i, :nv] = f.edge_normals
            edge_mask[i, :nv] = True
        return PackedFacets(
            normals=normals, origins=origins, edge_points=edge_points, edge_normals=edge_normals, edge_mask=edge_mask
        )

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        """For each facet, the indices of the facets it touches along an edge, a corner or a T-junction."""
        n_facets = len(self.facets)
        if not n_facets:
            return ()
        lo = np.array([f.bounds[0] for f in self.facets]) - TOUCH_TOLERANCE
        hi = np.array([f.bounds[1] for f in self.facets]) + TOUCH_TOLERANCE
        overlap = np.all((lo[:, None, :] <= hi[None, :, :]) & (lo[None, :, :] <= hi[:, None, :]), axis=2)
        neighbours: List[List[int]] = [[] for _ in range(n_facets)]
        for i, j in zip(*np.nonzero(np.triu(overlap, k=1))):
            if self.facets[i].touches(self.facets[j]):
                neighbours[int(i)].append(int(j))
                neighbours[int(j)].append(int(i))
        return tuple(tuple(sorted(ns)) for ns in neighbours)

    def translated(self, offset: Sequence[float]) -> "EnvironmentMap":
        off = np.asarray(offset, dtype=float)
        return EnvironmentMap(
            name=self.name,
            facets=tuple(
                Facet(f.facet_id, f.material_id, tuple(as_point(p + off) for p in f.points)) for f in self.facets
            ),
        )
