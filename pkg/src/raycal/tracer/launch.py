"""Launch directions for shooting-and-bouncing rays: a geodesic icosphere."""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations
from typing import Optional, Tuple

import numpy as np

MIN_SPACING_DEG = 0.05
MAX_SPACING_DEG = 10.0


@lru_cache(maxsize=1)
def _icosahedron() -> Tuple[np.ndarray, np.ndarray]:
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    verts = []
    for a in (-1.0, 1.0):
        for b in (-phi, phi):
            verts.extend([(0.0, a, b), (a, b, 0.0), (b, 0.0, a)])
    v = np.array(verts)
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    edge = float(np.min([np.linalg.norm(v[i] - v[j]) for i, j in combinations(range(12), 2)]))
    faces = [
        tri
        for tri in combinations(range(12), 3)
        if all(abs(np.linalg.norm(v[p] - v[q]) - edge) < 1e-9 for p, q in combinations(tri, 2))
    ]
    return v, np.array(faces, dtype=int)


def _face_grid(level: int) -> Tuple[np.ndarray, np.ndarray]:
    """Barycentric (i, j) index pairs of a frequency-(level+1) triangular grid."""
    n = level + 1
    ii, jj = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    keep = ii + jj <= n
    return ii[keep], jj[keep]


def _face_points(level: int, faces: Optional[np.ndarray] = None) -> np.ndarray:
    """Projected grid points per icosahedron face, shape (F, P, 3)."""
    verts, all_faces = _icosahedron()
    faces = all_faces if faces is None else faces
    n = level + 1
    ii, jj = _face_grid(level)
    a, b, c = verts[faces[:, 0]], verts[faces[:, 1]], verts[faces[:, 2]]
    w_a = (n - ii - jj)[None, :, None]
    pts = (a[:, None, :] * w_a + b[:, None, :] * ii[None, :, None] + c[:, None, :] * jj[None, :, None]) / n
    return pts / np.linalg.norm(pts, axis=2, keepdims=True)


def tessellation_gap(level: int) -> float:
    """Largest angle (degrees) between adjacent directions of a subdivision level.

    All icosahedron faces are congruent, so one face is enough.
    """
    n = level + 1
    ii, jj = _face_grid(level)
    up_i, up_j = ii[ii + jj <= n - 1], jj[ii + jj <= n - 1]

    def flat(i: np.ndarray, j: np.ndarray) -> np.ndarray:
        return i * (n + 1) - (i * (i - 1)) // 2 + j

    p0, p1, p2 = flat(up_i, up_j), flat(up_i + 1, up_j), flat(up_i, up_j + 1)
    _, faces = _icosahedron()
    pts = _face_points(level, faces[:1])[0]
    gap = max(float(np.max(_angle(pts[s], pts[t]))) for s, t in ((p0, p1), (p0, p2), (p1, p2)))
    return math.degrees(gap)


def _angle(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    cross = np.linalg.norm(np.cross(u, v), axis=-1)
    dot = np.sum(u * v, axis=-1)
    return np.arctan2(cross, dot)


@lru_cache(maxsize=64)
def subdivision_level(angular_spacing: float) -> int:
    """Smallest subdivision level whose largest neighbour gap is within *angular_spacing* degrees."""
    # Spacings coarser than the bare icosahedron are accepted and give its 12 vertices.
    if angular_spacing < MIN_SPACING_DEG or MAX_SPACING_DEG < angular_spacing < tessellation_gap(0):
        raise ValueError(f"angular spacing must be in [{MIN_SPACING_DEG}, {MAX_SPACING_DEG}] degrees, got {angular_spacing}")
    # The largest gap is never below the nominal base-edge / frequency, and stays within 1.5x of it.
    nominal = tessellation_gap(0) / angular_spacing
    lo = max(0, int(math.ceil(nominal)) - 1)
    hi = max(lo, int(math.ceil(1.5 * nominal)))
    while lo < hi:
        mid = (lo + hi) // 2
        if tessellation_gap(mid) <= angular_spacing:
            hi = mid
        else:
            lo = mid + 1
    return lo


@lru_cache(maxsize=8)
def launch_directions(angular_spacing: float) -> np.ndarray:
    """Deterministic quasi-uniform unit vectors with neighbour gaps <= *angular_spacing* degrees.

    Returned array is read-only, shape (N, 3), N = 10 (level+1)^2 + 2.
    """
    level = subdivision_level(angular_spacing)
    verts, faces = _icosahedron()
    n = level + 1
    # vertices, then edge interiors once per edge, then face interiors
    parts = [verts]
    if n > 1:
        k = (np.arange(1, n) / n)[:, None]
        edges = sorted({(min(p, q), max(p, q)) for face in faces for p, q in combinations(face, 2)})
        parts.extend((1.0 - k) * verts[a] + k * verts[b] for a, b in edges)
        ii, jj = _face_grid(level)
        interior = (ii >= 1) & (jj >= 1) & (ii + jj <= n - 1)
        if np.any(interior):
            parts.append(_face_points(level)[:, interior, :].reshape(-1, 3))
    pts = np.concatenate(parts)
    dirs = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    dirs.setflags(write=False)
    return dirs
