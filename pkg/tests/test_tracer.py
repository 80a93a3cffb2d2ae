"""Tests for launch directions, the hybrid tracer, the image-method oracle and scattering."""

from __future__ import annotations

import math

import numpy as np
import pytest

from raycal.config import TracerConfig
from raycal.exceptions import GeometryError, MissingMaterial, UncalibratedInteraction
from raycal.geometry import EnvironmentMap
from raycal.materials import Material, MaterialLibrary
from raycal.tracer import (
    facet_samples,
    image_method_exhaustive,
    launch_directions,
    refine_path,
    sbr_candidates,
    scatter_paths,
    subdivision_level,
    tessellation_gap,
    trace_paths,
)
from raycal.tracer.image import reflection_sequences
from raycal.tracer.sbr import edge_variants
from raycal.tracer.scatter import rebound_angle
from raycal.types import InteractionKind
from tests.scenes import box_room, corridor_room, random_corridor, rect, square_z, truth_library

FAST = TracerConfig(max_reflections=2, angular_spacing_deg=1.0, include_scattering=False)


def signature(paths):
    return [(p.facet_sequence, round(p.path_length, 6)) for p in paths]


def unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def angle_to_normal(direction: np.ndarray, normal: np.ndarray) -> float:
    return math.atan2(float(np.linalg.norm(np.cross(direction, normal))), abs(float(direction @ normal)))


def azimuth_gap(a: float, b: float) -> float:
    return abs((a - b + 180.0) % 360.0 - 180.0)


def assert_reciprocal(forward, backward) -> None:
    """Swapped endpoints give the reversed bounces, equal lengths and swapped departure/arrival angles."""
    ahead = {tuple(reversed(p.facet_sequence)): p for p in forward}
    behind = {p.facet_sequence: p for p in backward}
    assert sorted(ahead) == sorted(behind)
    for seq, p in ahead.items():
        q = behind[seq]
        assert abs(p.path_length - q.path_length) <= 1e-9
        assert azimuth_gap(p.aod[0], q.aoa[0]) <= 1e-9 and abs(p.aod[1] - q.aoa[1]) <= 1e-9
        assert azimuth_gap(p.aoa[0], q.aod[0]) <= 1e-9 and abs(p.aoa[1] - q.aod[1]) <= 1e-9


class TestLaunchDirections:
    def test_bare_icosahedron(self) -> None:
        dirs = launch_directions(63.5)
        assert dirs.shape == (12, 3)

    def test_unit_vectors_and_unique(self) -> None:
        dirs = launch_directions(5.0)
        assert np.allclose(np.linalg.norm(dirs, axis=1), 1.0)
        assert len(np.unique(np.round(dirs, 9), axis=0)) == len(dirs)

    def test_count_formula(self) -> None:
        level = subdivision_level(5.0)
        assert len(launch_directions(5.0)) == 10 * (level + 1) ** 2 + 2

    def test_level_is_smallest_meeting_gap(self) -> None:
        level = subdivision_level(5.0)
        assert tessellation_gap(level) <= 5.0
        assert tessellation_gap(level - 1) > 5.0

    def test_one_degree_count_near_area_heuristic(self) -> None:
        theta = math.radians(1.0)
        estimate = 16.0 / theta**2
        assert 0.5 * estimate <= len(launch_directions(1.0)) <= 2.0 * estimate

    def test_deterministic_and_read_only(self) -> None:
        a = launch_directions(5.0)
        assert np.array_equal(a, launch_directions(5.0))
        with pytest.raises(ValueError):
            a[0, 0] = 1.0

    @pytest.mark.parametrize("spacing", [0.01, 20.0])
    def test_out_of_range(self, spacing: float) -> None:
        with pytest.raises(ValueError, match="angular spacing"):
            subdivision_level(spacing)


class TestTracePaths:
    def test_empty_environment_is_los_only(self) -> None:
        paths = trace_paths(EnvironmentMap("empty"), MaterialLibrary(), (0, 0, 0), (3, 4, 0), FAST)
        assert len(paths) == 1
        assert paths[0].interactions == ()
        assert paths[0].path_length == pytest.approx(5.0)
        assert paths[0].path_id == "P000"

    def test_floor_two_paths(self, floor_env, office_lib) -> None:
        paths = trace_paths(floor_env, office_lib, (0, 0, 1.5), (10, 0, 1.5), FAST, frequency_ghz=28.0)
        assert [p.path_length for p in paths] == pytest.approx([10.0, math.hypot(10, 3)])
        assert paths[0].is_los
        bounce = paths[1].interactions[0]
        assert bounce.kind == InteractionKind.REFLECTION
        assert bounce.facet_id == "floor"
        assert bounce.point == pytest.approx((5, 0, 0))
        assert paths[1].aod[1] == pytest.approx(-math.degrees(math.atan2(1.5, 5)))

    def test_matches_exhaustive_oracle_in_box(self, box_env, truth_lib) -> None:
        tx, rx = (2.0, 3.0, 1.5), (7.5, 5.2, 1.2)
        traced = trace_paths(box_env, truth_lib, tx, rx, FAST)
        oracle = image_method_exhaustive(box_env, truth_lib, tx, rx, max_order=2)
        assert signature(traced) == signature(oracle)
        # 1 + 6 + 18: parallel pairs bounce in both orders, perpendicular pairs in one
        assert len(oracle) == 25

    def test_reciprocity(self, box_env, truth_lib) -> None:
        tx, rx = (2.0, 3.0, 1.5), (7.5, 5.2, 1.2)
        assert_reciprocal(trace_paths(box_env, truth_lib, tx, rx, FAST), trace_paths(box_env, truth_lib, rx, tx, FAST))

    def test_specular_law_at_every_reflection(self, box_env, truth_lib) -> None:
        paths = trace_paths(box_env, truth_lib, (2.0, 3.0, 1.5), (7.5, 5.2, 1.2), FAST)
        reflections = 0
        for path in paths:
            nodes = [np.asarray(path.tx)] + [np.asarray(i.point) for i in path.interactions] + [np.asarray(path.rx)]
            for k, inter in enumerate(path.interactions, start=1):
                if inter.kind != InteractionKind.REFLECTION:
                    continue
                n = box_env.facet(inter.facet_id).normal
                incoming = unit(nodes[k] - nodes[k - 1])
                outgoing = unit(nodes[k + 1] - nodes[k])
                assert abs(angle_to_normal(incoming, n) - angle_to_normal(outgoing, n)) <= 1e-9
                assert abs(float(np.cross(incoming, outgoing) @ n)) <= 1e-9
                assert outgoing == pytest.approx(incoming - 2.0 * float(incoming @ n) * n, abs=1e-9)
                reflections += 1
        assert reflections == 6 + 2 * 18

    def test_path_lengths_sorted_and_ids_sequential(self, box_env, truth_lib) -> None:
        paths = trace_paths(box_env, truth_lib, (2.0, 3.0, 1.5), (7.5, 5.2, 1.2), FAST)
        lengths = [p.path_length for p in paths]
        assert lengths == sorted(lengths)
        assert [p.path_id for p in paths] == [f"P{k:03d}" for k in range(len(paths))]

    def test_penetration_through_glass(self, truth_lib) -> None:
        env = EnvironmentMap(
            "partition",
            (
                square_z("floor", "drywall", -100, 100, -100, 100),
                rect("pane", "glass", [(5, -2, 0.5), (5, 2, 0.5), (5, 2, 3), (5, -2, 3)]),
            ),
        )
        paths = trace_paths(env, truth_lib, (0, 0, 1.5), (10, 0, 1.5), FAST)
        los = paths[0]
        assert los.path_length == pytest.approx(10.0)
        assert los.n_penetrations == 1 and los.n_reflections == 0
        assert los.interactions[0].material_id == "glass"
        assert los.interactions[0].point == pytest.approx((5, 0, 1.5))
        assert any(p.facet_sequence == ("floor",) for p in paths)

        blocked = trace_paths(env, truth_lib, (0, 0, 1.5), (10, 0, 1.5), TracerConfig(max_reflections=2, angular_spacing_deg=1.0, max_penetrations=0))
        assert all(p.n_penetrations == 0 for p in blocked)
        assert not any(p.facet_sequence == () for p in blocked)

    def test_missing_material_dropped(self, floor_env) -> None:
        lib = MaterialLibrary([Material("glass", 28.0, 3.5, 3.2)])
        paths = trace_paths(floor_env, lib, (0, 0, 1.5), (10, 0, 1.5), FAST)
        assert len(paths) == 1 and paths[0].is_los

    def test_missing_material_strict(self, floor_env) -> None:
        lib = MaterialLibrary([Material("glass", 28.0, 3.5, 3.2)])
        strict = TracerConfig(max_reflections=2, angular_spacing_deg=1.0, strict_materials=True)
        with pytest.raises(MissingMaterial):
            trace_paths(floor_env, lib, (0, 0, 1.5), (10, 0, 1.5), strict)

    def test_uncalibrated_reflection(self, floor_env) -> None:
        lib = MaterialLibrary([Material("drywall", 28.0, penetration_loss=4.0)])
        assert len(trace_paths(floor_env, lib, (0, 0, 1.5), (10, 0, 1.5), FAST)) == 1
        strict = TracerConfig(max_reflections=2, angular_spacing_deg=1.0, strict_materials=True)
        with pytest.raises(UncalibratedInteraction):
            trace_paths(floor_env, lib, (0, 0, 1.5), (10, 0, 1.5), strict)

    def test_endpoint_on_facet(self, floor_env, office_lib) -> None:
        with pytest.raises(GeometryError, match="lies on facet"):
            trace_paths(floor_env, office_lib, (0, 0, 0), (10, 0, 1.5), FAST, frequency_ghz=28.0)

    def test_coincident_endpoints(self, floor_env, office_lib) -> None:
        with pytest.raises(GeometryError, match="coincide"):
            trace_paths(floor_env, office_lib, (1, 1, 1), (1, 1, 1), FAST, frequency_ghz=28.0)

    def test_reflection_order_capped(self) -> None:
        assert TracerConfig(max_reflections=9).reflection_order == 5

    def test_traced_order_never_exceeds_five(self) -> None:
        env = EnvironmentMap(
            "corridor",
            (
                rect("a", "drywall", [(0, -10, -1), (0, 10, -1), (0, 10, 1), (0, -10, 1)]),
                rect("b", "drywall", [(4, -10, -1), (4, -10, 1), (4, 10, 1), (4, 10, -1)]),
            ),
        )
        deep = trace_paths(env, truth_library(), (1, 0, 0), (3, 2, 0), TracerConfig(max_reflections=9, angular_spacing_deg=2.0, include_scattering=False))
        five = trace_paths(env, truth_library(), (1, 0, 0), (3, 2, 0), TracerConfig(max_reflections=5, angular_spacing_deg=2.0, include_scattering=False))
        # two alternating sequences per order between parallel walls
        assert sorted(p.n_reflections for p in deep) == [0] + [k for k in range(1, 6) for _ in range(2)]
        assert signature(deep) == signature(five)

    def test_config_validation(self) -> None:
        with pytest.raises(ValueError):
            TracerConfig(angular_spacing_deg=0.01)
        with pytest.raises(ValueError):
            TracerConfig(max_penetrations=-1)


class TestSbrCandidates:
    def test_floor_candidate(self, floor_env) -> None:
        found = sbr_candidates(floor_env, (0, 0, 1.5), (10, 0, 1.5), max_reflections=1, max_penetrations=3, angular_spacing_deg=2.0)
        assert ("floor",) in found

    def test_no_reflections_requested(self, floor_env) -> None:
        assert sbr_candidates(floor_env, (0, 0, 1.5), (10, 0, 1.5), max_reflections=0, max_penetrations=3, angular_spacing_deg=2.0) == set()

    def test_edge_variants(self) -> None:
        # 0 and 1 meet at a corner, 2 stands alone
        adjacency = [(1,), (0,), ()]
        variants = edge_variants((0, 2), adjacency, max_length=3)
        assert (2, 0) not in variants
        assert {(0,), (2,), (1, 2), (1, 0, 2), (0, 1, 2)} <= variants
        assert (0, 0, 2) not in variants and (0, 2) not in variants
        assert edge_variants((1, 0), adjacency, max_length=2) == {(0, 1), (1,), (0,)}

    def test_edge_variants_respect_length(self) -> None:
        assert all(len(v) <= 1 for v in edge_variants((0,), [(1,), (0,)], max_length=1))


class TestEdgeSplitPaths:
    """A ceiling/wall double bounce 3 mm from the corner they share."""

    env = corridor_room(12.0, 3.0, 3.0, partition=(10.0, 1.5, 2.0), pillar=(4.6, 5.0, 0.2, 0.5))
    tx, rx = (2.0, 2.0, 2.0), (8.0, 1.0, 0.99)
    config = TracerConfig(max_reflections=2, angular_spacing_deg=0.5, include_scattering=False)

    def test_corner_path_exists(self, truth_lib) -> None:
        oracle = image_method_exhaustive(self.env, truth_lib, self.tx, self.rx, max_order=2)
        sequences = {p.facet_sequence for p in oracle}
        assert ("ceiling", "wall_y1") in sequences
        assert ("wall_y1", "ceiling") not in sequences

    def test_matches_oracle(self, truth_lib) -> None:
        traced = trace_paths(self.env, truth_lib, self.tx, self.rx, self.config)
        oracle = image_method_exhaustive(self.env, truth_lib, self.tx, self.rx, max_order=2)
        assert signature(traced) == signature(oracle)

    def test_reciprocity(self, truth_lib) -> None:
        forward = trace_paths(self.env, truth_lib, self.tx, self.rx, self.config)
        backward = trace_paths(self.env, truth_lib, self.rx, self.tx, self.config)
        assert any(p.facet_sequence == ("ceiling", "wall_y1") for p in forward)
        assert_reciprocal(forward, backward)


class TestRefinePath:
    def test_empty_sequence_is_los(self, floor_env) -> None:
        path = refine_path((), (0, 0, 1), (0, 3, 5), floor_env)
        assert path is not None and path.path_length == pytest.approx(5.0)

    def test_floor_specular_point(self, floor_env) -> None:
        path = refine_path(("floor",), (0, 0, 1.5), (10, 0, 1.5), floor_env)
        assert path is not None
        assert path.interactions[0].point == pytest.approx((5, 0, 0))
        assert path.interactions[0].incidence_angle == pytest.approx(math.degrees(math.atan2(5, 1.5)))

    def test_specular_point_outside_facet(self) -> None:
        env = EnvironmentMap("strip", (square_z("floor", "wood", 4, 4.5, -1, 1),))
        assert refine_path(("floor",), (0, 0, 1.5), (10, 0, 1.5), env) is None

    def test_double_image_between_parallel_walls(self) -> None:
        env = EnvironmentMap(
            "corridor",
            (
                rect("a", "drywall", [(0, -10, -1), (0, 10, -1), (0, 10, 1), (0, -10, 1)]),
                rect("b", "drywall", [(4, -10, -1), (4, -10, 1), (4, 10, 1), (4, 10, -1)]),
            ),
        )
        path = refine_path(("a", "b"), (1, 0, 0), (3, 2, 0), env)
        assert path is not None
        assert path.path_length == pytest.approx(math.sqrt(40))
        assert path.facet_sequence == ("a", "b")

    def test_repeated_facet_rejected(self, floor_env) -> None:
        assert refine_path(("floor", "floor"), (0, 0, 1.5), (10, 0, 1.5), floor_env) is None

    def test_opposite_sides_rejected(self, floor_env) -> None:
        assert refine_path(("floor",), (0, 0, 1.5), (10, 0, -1.5), floor_env) is None


class TestImageMethodExhaustive:
    def test_empty(self) -> None:
        paths = image_method_exhaustive(EnvironmentMap("empty"), MaterialLibrary(), (0, 0, 0), (1, 0, 0))
        assert len(paths) == 1 and paths[0].is_los

    def test_single_facet_order_one(self, floor_env, office_lib) -> None:
        paths = image_method_exhaustive(floor_env, office_lib, (0, 0, 1.5), (10, 0, 1.5), max_order=1, frequency_ghz=28.0)
        assert len(paths) <= 2

    def test_sequence_enumeration_count(self) -> None:
        assert len(list(reflection_sequences([str(k) for k in range(6)], 2))) == 1 + 6 + 30

    def test_order_limit(self, box_env, truth_lib) -> None:
        with pytest.raises(ValueError, match="max_order"):
            image_method_exhaustive(box_env, truth_lib, (1, 1, 1), (2, 2, 2), max_order=4)


class TestScatter:
    def scatter_lib(self) -> MaterialLibrary:
        return MaterialLibrary([Material("wood", 28.0, 4.8, 2.4, scattering_coefficient=0.4)])

    def test_cell_centres(self) -> None:
        pts = facet_samples(square_z("f", "wood", 0, 1, 0, 1), 0.5)
        assert len(pts) == 4
        assert sorted(map(tuple, np.round(pts, 9))) == [(0.25, 0.25, 0), (0.25, 0.75, 0), (0.75, 0.25, 0), (0.75, 0.75, 0)]

    def test_zero_coefficient_gives_nothing(self, truth_lib) -> None:
        env = EnvironmentMap("tile", (square_z("f", "wood", 0, 1, 0, 1),))
        assert scatter_paths(env, truth_lib, (0, 0.25, 1), (0.5, 0.25, 1), grid_m=0.5) == []

    def test_one_path_per_sample(self) -> None:
        env = EnvironmentMap("tile", (square_z("f", "wood", 0, 1, 0, 1),))
        paths = scatter_paths(env, self.scatter_lib(), (0, 0.25, 1), (0.5, 0.25, 1), grid_m=0.5)
        assert len(paths) == 4
        assert all(p.n_scatter == 1 for p in paths)
        angles = sorted(p.interactions[0].rebound_angle for p in paths)
        assert angles[0] == pytest.approx(0.0, abs=1e-6)

    def test_band_required_for_multiband_library(self) -> None:
        env = EnvironmentMap("tile", (square_z("f", "wood", 0, 1, 0, 1),))
        lib = self.scatter_lib().merged(MaterialLibrary([Material("wood", 140.0, 7.0, 5.0, scattering_coefficient=0.3)]))
        with pytest.raises(ValueError, match="frequency_ghz is required"):
            scatter_paths(env, lib, (0, 0.25, 1), (0.5, 0.25, 1), grid_m=0.5)
        assert len(scatter_paths(env, lib, (0, 0.25, 1), (0.5, 0.25, 1), grid_m=0.5, frequency_ghz=140.0)) == 4

    def test_no_band_needed_without_scatterers(self) -> None:
        env = EnvironmentMap("tile", (square_z("f", "wood", 0, 1, 0, 1),))
        lib = MaterialLibrary([Material("wood", 28.0, 4.8, 2.4), Material("wood", 140.0, 7.0, 5.0)])
        assert scatter_paths(env, lib, (0, 0.25, 1), (0.5, 0.25, 1), grid_m=0.5) == []

    def test_rebound_angle_at_specular_point(self) -> None:
        facet = square_z("f", "wood", 0, 1, 0, 1)
        angle = rebound_angle(np.array([0, 0.25, 1.0]), np.array([0.25, 0.25, 0.0]), np.array([0.5, 0.25, 1.0]), facet)
        assert angle == pytest.approx(0.0, abs=1e-9)

    def test_tracer_includes_scatter(self) -> None:
        env = EnvironmentMap("tile", (square_z("f", "wood", 0, 1, 0, 1),))
        config = TracerConfig(max_reflections=1, angular_spacing_deg=2.0, scatter_grid_m=0.5)
        paths = trace_paths(env, self.scatter_lib(), (0, 0.25, 1), (0.5, 0.25, 1), config)
        assert sum(p.n_scatter for p in paths) == 4
        assert any(p.n_reflections == 1 for p in paths)


@pytest.mark.slow
class TestRandomizedOracle:
    config = TracerConfig(max_reflections=2, angular_spacing_deg=0.5, include_scattering=False)

    def test_random_boxes(self) -> None:
        rng = np.random.default_rng(7)
        lib = truth_library()
        for _ in range(10):
            lx, ly, lz = rng.uniform(3, 12), rng.uniform(3, 12), rng.uniform(2.5, 4)
            env = box_room(lx, ly, lz)
            tx = tuple(rng.uniform(0.2, 0.8) * np.array([lx, ly, lz]))
            rx = tuple(rng.uniform(0.2, 0.8) * np.array([lx, ly, lz]))
            traced = trace_paths(env, lib, tx, rx, self.config)
            oracle = image_method_exhaustive(env, lib, tx, rx, max_order=2)
            assert signature(traced) == signature(oracle), (lx, ly, lz, tx, rx)

    def test_random_corridors(self) -> None:
        rng = np.random.default_rng(23)
        lib = truth_library()
        for _ in range(25):
            env, tx, rx = random_corridor(rng)
            assert len(env) <= 20
            traced = trace_paths(env, lib, tx, rx, self.config)
            oracle = image_method_exhaustive(env, lib, tx, rx, max_order=2)
            assert signature(traced) == signature(oracle), (tx, rx)
