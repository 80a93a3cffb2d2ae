"""Tests for the JSON documents and CSV tables."""

from __future__ import annotations

import json
import math
import os

import numpy as np
import pytest

from raycal.calibration import CalibrationResult, DirectionalMeasurement
from raycal.exceptions import GeometryError, InputError
from raycal.formats import (
    calibration_report,
    dump_library,
    dump_report,
    load_environment,
    load_library,
    load_run_config,
    parse_environment,
    parse_library,
    read_measurements,
    read_mpcs,
    read_stats,
    save_environment,
    save_library,
    write_measurements,
    write_mpcs,
    write_stats,
)
from raycal.materials import Material, MaterialLibrary, reference_library
from raycal.stats import ChannelStats
from raycal.types import MultipathComponent
from tests.scenes import box_document, box_room, write_json

CORRUPT_VERTEX = """{
  "name": "room",
  "facets": [
    {
      "id": "floor",
      "material": "wood",
      "vertices": [
        [0, 0, 0],
        [1, 0, 0],
        [1, 1],
        [0, 1, 0]
      ]
    }
  ]
}
"""

NON_CONVEX = """{
  "name": "room",
  "facets": [
    {
      "id": "ok",
      "material": "wood",
      "vertices": [[0, 0, 0], [1, 0, 0], [1, 1, 0]]
    },
    {
      "id": "dart",
      "material": "wood",
      "vertices": [[0, 0, 1], [2, 0, 1], [1, 0.5, 1], [2, 2, 1], [0, 2, 1]]
    }
  ]
}
"""


def measurement(mid: str, tof=None, hpbw=None) -> DirectionalMeasurement:
    return DirectionalMeasurement(
        id=mid,
        tx=(1.0, 2.0, 1.5),
        rx=(7.25, 3.1, 1.2),
        frequency=28.0,
        ptx=10.0,
        tx_pointing=(12.5, -3.0),
        rx_pointing=(190.0, 2.0),
        tx_gain=15.0,
        rx_gain=15.0,
        measured_power=-71.123456789,
        measured_tof=tof,
        tx_hpbw=hpbw,
        rx_hpbw=hpbw,
    )


class TestEnvironmentFiles:
    def test_round_trip(self, tmp_path) -> None:
        path = os.path.join(str(tmp_path), "env.json")
        save_environment(box_room(), path, materials_ref="materials.json")
        loaded = load_environment(path)
        assert loaded.env == box_room()
        assert loaded.materials_ref == os.path.join(str(tmp_path), "materials.json")

    def test_document_fixture(self) -> None:
        loaded = parse_environment(json.dumps(box_document()))
        assert len(loaded.env) == 6
        assert loaded.env.material_ids == ["drywall", "glass", "wood"]

    def test_corrupt_vertex_reports_line(self) -> None:
        with pytest.raises(InputError) as exc:
            parse_environment(CORRUPT_VERTEX, "env.json")
        assert exc.value.line == 10
        assert str(exc.value).startswith("env.json:10:")

    def test_invalid_facet_reports_line(self) -> None:
        with pytest.raises(GeometryError) as exc:
            parse_environment(NON_CONVEX, "env.json")
        assert exc.value.line == 12
        assert "not convex" in str(exc.value)

    def test_invalid_json(self) -> None:
        with pytest.raises(InputError) as exc:
            parse_environment('{\n  "name": "x",\n  "facets": [\n}', "env.json")
        assert exc.value.line == 4

    def test_unknown_field(self) -> None:
        with pytest.raises(InputError, match="colour"):
            parse_environment(json.dumps({"name": "x", "colour": "red"}))

    def test_missing_file(self, tmp_path) -> None:
        with pytest.raises(InputError, match="cannot read"):
            load_environment(os.path.join(str(tmp_path), "nope.json"))


class TestLibraryFiles:
    def test_round_trip(self) -> None:
        lib = reference_library()
        assert parse_library(dump_library(lib)) == lib

    def test_absent_losses_omitted(self) -> None:
        [row] = json.loads(dump_library(MaterialLibrary([Material("granite", 140.0, reflection_loss=13.1)])))
        assert "penetration_loss_db" not in row
        assert "environment" not in row

    def test_save_and_load(self, tmp_path) -> None:
        path = os.path.join(str(tmp_path), "lib.json")
        lib = MaterialLibrary([Material("tile", 73.0, 4.25, 7.5, scattering_coefficient=0.3)])
        save_library(lib, path)
        assert load_library(path) == lib

    def test_negative_loss_rejected(self) -> None:
        with pytest.raises(InputError, match="reflection_loss_db"):
            parse_library(json.dumps([{"name": "x", "frequency_ghz": 28, "reflection_loss_db": -1}]))

    def test_duplicate_rows_rejected(self) -> None:
        row = {"name": "x", "frequency_ghz": 28}
        with pytest.raises(InputError, match="duplicate"):
            parse_library(json.dumps([row, row]))


class TestMeasurementTable:
    def test_round_trip(self, tmp_path) -> None:
        path = os.path.join(str(tmp_path), "m.csv")
        records = [measurement("a", tof=35.5, hpbw=10.0), measurement("b")]
        write_measurements(path, records)
        assert read_measurements(path) == records

    def test_bad_number_reports_line(self, tmp_path) -> None:
        path = os.path.join(str(tmp_path), "m.csv")
        write_measurements(path, [measurement("a"), measurement("b")])
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        lines[2] = lines[2].replace("28.0", "twenty-eight", 1)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        with pytest.raises(InputError) as exc:
            read_measurements(path)
        assert exc.value.line == 3
        assert "f_ghz" in str(exc.value)

    def test_missing_columns(self, tmp_path) -> None:
        path = os.path.join(str(tmp_path), "m.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("id,tx_x\na,1\n")
        with pytest.raises(InputError, match="missing columns") as exc:
            read_measurements(path)
        assert exc.value.line == 1


class TestOtherTables:
    def test_mpcs(self, tmp_path) -> None:
        path = os.path.join(str(tmp_path), "mpcs.csv")
        mpcs = [MultipathComponent(-81.39, 33.356, (180.0, 0.0), (0.0, -2.5)), MultipathComponent(-90.1, 40.0, (170.0, 5.0), (10.0, 1.0))]
        write_mpcs(path, mpcs)
        assert read_mpcs(path) == mpcs
        with open(path, encoding="utf-8") as fh:
            assert fh.readline().strip().split(",")[-1] == "interaction_chain"

    def test_stats(self, tmp_path) -> None:
        path = os.path.join(str(tmp_path), "stats.csv")
        rows = [ChannelStats("loc1", 7, -65.2, 12.5, 30.1, 20.7), ChannelStats("loc2", 3, -80.0, 4.0, 11.0, 9.5)]
        write_stats(path, rows)
        assert read_stats(path) == rows


class TestReport:
    def result(self) -> CalibrationResult:
        return CalibrationResult(
            frequency=28.0,
            labels=["drywall:reflection", "glass:penetration"],
            loss_vector=np.array([6.1, 3.2]),
            standard_errors=np.array([0.2, math.nan]),
            residuals=np.array([0.5, -0.5, 1.5]),
            measurement_ids=["a", "b", "c"],
            rank=2,
            unresolved_materials=["granite"],
            unresolved_columns=["drywall:penetration"],
            n_validation=1,
            unmatched=[("d", "tof")],
        )

    def test_fields(self) -> None:
        report = calibration_report(self.result())
        assert report["frequency_ghz"] == 28.0
        assert report["n_rows"] == 3 and report["n_validation"] == 1
        assert report["losses"][0] == {"material": "drywall", "kind": "reflection", "loss_db": 6.1, "standard_error_db": 0.2}
        assert report["losses"][1]["standard_error_db"] is None
        assert report["unresolved_materials"] == ["granite"]
        assert report["unmatched"] == [{"id": "d", "gate": "tof"}]

    def test_dump_is_strict_json(self) -> None:
        text = dump_report([self.result()])
        assert "NaN" not in text
        assert len(json.loads(text)["bands"]) == 1


class TestRunConfig:
    def test_load(self, tmp_path) -> None:
        path = write_json(
            os.path.join(str(tmp_path), "run.json"),
            {
                "environment": "env.json",
                "frequency_ghz": 140.0,
                "tracer": {"max_reflections": 3, "angular_spacing_deg": 1.0},
                "rx_antenna": {"boresight_gain_dbi": 21.0, "hpbw_az_deg": 8.0},
                "links": [{"id": "L1", "tx": [0, 0, 1.5], "rx": [5, 0, 1.5], "rx_pointing": [180, 0]}],
                "seed": 7,
            },
        )
        cfg = load_run_config(path)
        assert cfg.resolve(cfg.environment) == os.path.join(str(tmp_path), "env.json")
        assert cfg.tracer.max_reflections == 3
        assert cfg.tracer.max_penetrations == 3
        assert cfg.rx_antenna.hpbw_az_deg == 8.0
        assert cfg.links[0].rx_pointing == (180.0, 0.0)
        assert cfg.links[0].tx_pointing is None
        assert cfg.effective_bandwidth_ghz == 1.0
        assert cfg.seed == 7

    def test_default_bandwidth_at_28(self, tmp_path) -> None:
        cfg = load_run_config(write_json(os.path.join(str(tmp_path), "run.json"), {}))
        assert cfg.effective_bandwidth_ghz == 0.8

    def test_duplicate_links(self, tmp_path) -> None:
        link = {"id": "L1", "tx": [0, 0, 1], "rx": [1, 0, 1]}
        path = write_json(os.path.join(str(tmp_path), "run.json"), {"links": [link, link]})
        with pytest.raises(InputError, match="unique"):
            load_run_config(path)

    def test_out_of_range_spacing(self, tmp_path) -> None:
        path = write_json(os.path.join(str(tmp_path), "run.json"), {"tracer": {"angular_spacing_deg": 30}})
        with pytest.raises(InputError, match="angular_spacing_deg"):
            load_run_config(path)
