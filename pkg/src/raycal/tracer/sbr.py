"""Shooting-and-bouncing rays: vectorized candidate search with reception spheres.

Each launched ray is followed as a straight line through every facet it meets
(penetrations) and spawns a reflected child at each hit, up to the reflection
limit. A ray whose line passes within the reception sphere of the receiver
yields its reflection facet sequence as a candidate; candidates are refined
exactly by the image method afterwards, so detection only has to be inclusive.

A ray tube split by an edge can reach the receiver only through the wrong
neighbour: at a concave corner the rays nearest the true path meet the two
facets in the opposite order. Sequences detected by rays that passed within the
fringe of an edge are also submitted after one edit with a touching facet
(see ``edge_variants``).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Set, Tuple

import numpy as np

from raycal.geometry import GEOMETRIC_TOLERANCE, EnvironmentMap
from raycal.geometry.facet import PackedFacets
from raycal.tracer.launch import launch_directions

logger = logging.getLogger("raycal.tracer.sbr")

# Upper bound on the (rays x facets x edges) working set of one batch.
_BATCH_ELEMENTS = 1 << 20
_SQRT3 = math.sqrt(3.0)
# Near-edge hits are judged against this multiple of the local ray spacing.
_FRINGE_FACTOR = 2.0
_MIN_COS = 0.1


@dataclass
class RayBundle:
    origins: np.ndarray  # (n, 3)
    directions: np.ndarray  # (n, 3)
    travelled: np.ndarray  # (n,) unfolded distance from tx to origin
    penetrations: np.ndarray  # (n,) certain crossings so far
    last: np.ndarray  # (n,) facet index the ray leaves from, -1 at tx
    prefix: np.ndarray  # (n, depth) reflection facet indices
    near_edge: np.ndarray  # (n,) some reflection so far fell within the fringe of an edge

    def __len__(self) -> int:
        return len(self.origins)

    def batches(self, size: int) -> Iterator["RayBundle"]:
        for start in range(0, len(self), size):
            sl = slice(start, start + size)
            yield RayBundle(
                self.origins[sl],
                self.directions[sl],
                self.travelled[sl],
                self.penetrations[sl],
                self.last[sl],
                self.prefix[sl],
                self.near_edge[sl],
            )

    @classmethod
    def launch(cls, tx: Sequence[float], directions: np.ndarray) -> "RayBundle":
        n = len(directions)
        return cls(
            origins=np.tile(np.asarray(tx, dtype=float), (n, 1)),
            directions=np.array(directions, dtype=float),
            travelled=np.zeros(n),
            penetrations=np.zeros(n, dtype=int),
            last=np.full(n, -1, dtype=int),
            prefix=np.zeros((n, 0), dtype=int),
            near_edge=np.zeros(n, dtype=bool),
        )

    @classmethod
    def concat(cls, parts: Sequence["RayBundle"], depth: int) -> "RayBundle":
        if not parts:
            empty = np.zeros(0, dtype=int)
            return cls(np.zeros((0, 3)), np.zeros((0, 3)), np.zeros(0), empty, empty, np.zeros((0, depth), dtype=int), np.zeros(0, dtype=bool))
        return cls(
            origins=np.concatenate([p.origins for p in parts]),
            directions=np.concatenate([p.directions for p in parts]),
            travelled=np.concatenate([p.travelled for p in parts]),
            penetrations=np.concatenate([p.penetrations for p in parts]),
            last=np.concatenate([p.last for p in parts]),
            prefix=np.concatenate([p.prefix for p in parts]),
            near_edge=np.concatenate([p.near_edge for p in parts]),
        )


@dataclass
class _Hits:
    t: np.ndarray  # (n, F) distance along the ray, inf where no plane hit
    points: np.ndarray  # (n, F, 3)
    hard: np.ndarray  # (n, F) certainly inside the facet
    branch: np.ndarray  # (n, F) inside or near enough to the edge to spawn a reflection
    hard_before: np.ndarray  # (n, F) certain crossings strictly before each hit


def _cast(bundle: RayBundle, packed: PackedFacets, spacing_rad: float) -> _Hits:
    o, d = bundle.origins, bundle.directions
    n_facets = len(packed.normals)
    denom = d @ packed.normals.T
    offsets = np.einsum("fk,fk->f", packed.origins, packed.normals)
    num = offsets[None, :] - o @ packed.normals.T
    with np.errstate(divide="ignore", invalid="ignore"):
        t = num / denom
    valid = (np.abs(denom) > 1e-15) & (t > GEOMETRIC_TOLERANCE) & (np.arange(n_facets)[None, :] != bundle.last[:, None])
    t = np.where(valid, t, np.inf)
    points = o[:, None, :] + np.where(valid, t, 0.0)[..., None] * d[:, None, :]

    rel = points[:, :, None, :] - packed.edge_points[None]
    dots = np.einsum("nfkc,fkc->nfk", rel, packed.edge_normals)
    clearance = np.min(np.where(packed.edge_mask[None], dots, np.inf), axis=2)

    unfolded = bundle.travelled[:, None] + np.where(valid, t, 0.0)
    cos = np.maximum(np.abs(denom), _MIN_COS)
    margin = _FRINGE_FACTOR * unfolded * spacing_rad / cos
    hard = valid & (clearance >= margin)
    branch = valid & (clearance >= -margin)

    order = np.argsort(t, axis=1, kind="stable")
    sorted_hard = np.take_along_axis(hard, order, axis=1).astype(int)
    before_sorted = np.cumsum(sorted_hard, axis=1) - sorted_hard
    hard_before = np.empty_like(before_sorted)
    np.put_along_axis(hard_before, order, before_sorted, axis=1)
    return _Hits(t=t, points=points, hard=hard, branch=branch, hard_before=hard_before)


def _received(bundle: RayBundle, hits: _Hits, rx: np.ndarray, spacing_rad: float, max_penetrations: int) -> np.ndarray:
    w = rx[None, :] - bundle.origins
    s = np.einsum("nc,nc->n", w, bundle.directions)
    miss = np.linalg.norm(w - s[:, None] * bundle.directions, axis=1)
    radius = (bundle.travelled + np.maximum(s, 0.0)) * spacing_rad / _SQRT3
    crossed = np.sum(hits.hard & (hits.t < s[:, None]), axis=1)
    return (s > 0.0) & (miss <= radius) & (bundle.penetrations + crossed <= max_penetrations)


def _children(bundle: RayBundle, hits: _Hits, normals: np.ndarray, max_penetrations: int) -> RayBundle:
    allowed = hits.branch & (bundle.penetrations[:, None] + hits.hard_before <= max_penetrations)
    rows, cols = np.nonzero(allowed)
    d = bundle.directions[rows]
    n = normals[cols]
    reflected = d - 2.0 * np.einsum("nc,nc->n", d, n)[:, None] * n
    return RayBundle(
        origins=hits.points[rows, cols],
        directions=reflected / np.linalg.norm(reflected, axis=1, keepdims=True),
        travelled=bundle.travelled[rows] + hits.t[rows, cols],
        penetrations=bundle.penetrations[rows] + hits.hard_before[rows, cols],
        last=cols.astype(int),
        prefix=np.concatenate([bundle.prefix[rows], cols[:, None].astype(int)], axis=1),
        near_edge=bundle.near_edge[rows] | ~hits.hard[rows, cols],
    )


def edge_variants(sequence: Tuple[int, ...], adjacency: Sequence[Sequence[int]], max_length: int) -> Set[Tuple[int, ...]]:
    """Sequences one touching-facet edit away from *sequence*, without repeated consecutive facets."""
    n = len(sequence)
    out: Set[Tuple[int, ...]] = set()
    for i, facet in enumerate(sequence):
        if n > 1:
            out.add(sequence[:i] + sequence[i + 1 :])
        for other in adjacency[facet]:
            out.add(sequence[:i] + (other,) + sequence[i + 1 :])
            if n < max_length:
                out.add(sequence[:i] + (other,) + sequence[i:])
                out.add(sequence[: i + 1] + (other,) + sequence[i + 1 :])
        if i + 1 < n and sequence[i + 1] in adjacency[facet]:
            out.add(sequence[:i] + (sequence[i + 1], facet) + sequence[i + 2 :])
    out.discard(sequence)
    return {s for s in out if all(a != b for a, b in zip(s, s[1:]))}


def sbr_candidates(
    env: EnvironmentMap,
    tx: Sequence[float],
    rx: Sequence[float],
    max_reflections: int,
    max_penetrations: int,
    angular_spacing_deg: float,
) -> Set[Tuple[str, ...]]:
    """Reflection facet sequences (length >= 1) whose rays reach the receiver's reception sphere.

    Includes the edge variants of every sequence whose rays grazed an edge.
    """
    if not len(env) or max_reflections < 1:
        return set()
    packed = env.packed
    ids = [f.facet_id for f in env.facets]
    spacing = math.radians(angular_spacing_deg)
    rx_a = np.asarray(rx, dtype=float)
    per_ray = len(ids) * max(packed.edge_mask.shape[1], 1) * 3
    batch = max(64, _BATCH_ELEMENTS // per_ray)

    found: Set[Tuple[int, ...]] = set()
    near_edge: Set[Tuple[int, ...]] = set()
    bundle = RayBundle.launch(tx, launch_directions(angular_spacing_deg))
    for depth in range(max_reflections + 1):
        spawned = []
        for part in bundle.batches(batch):
            hits = _cast(part, packed, spacing)
            if depth > 0:
                for row in np.nonzero(_received(part, hits, rx_a, spacing, max_penetrations))[0]:
                    seq = tuple(int(k) for k in part.prefix[row])
                    found.add(seq)
                    if part.near_edge[row]:
                        near_edge.add(seq)
            if depth < max_reflections:
                spawned.append(_children(part, hits, packed.normals, max_penetrations))
        logger.debug("SBR depth %d: %d rays, %d candidates so far", depth, len(bundle), len(found))
        if depth == max_reflections:
            break
        bundle = RayBundle.concat(spawned, depth + 1)
        if not len(bundle):
            break
    adjacency = env.adjacency
    for seq in near_edge:
        found |= edge_variants(seq, adjacency, max_reflections)
    logger.debug("SBR: %d candidates after edge variants of %d near-edge sequences", len(found), len(near_edge))
    return {tuple(ids[k] for k in seq) for seq in found}
