"""Tests for synthetic measurement generation."""

from __future__ import annotations

import numpy as np
import pytest

from raycal.channel import fspl
from raycal.config import AntennaConfig, LinkSpec, TracerConfig
from raycal.geometry import EnvironmentMap
from raycal.materials import MaterialLibrary
from raycal.synth import noise_generator, synthesize_measurements
from tests.scenes import box_room, truth_library

HORN = AntennaConfig(boresight_gain_dbi=15.0, hpbw_az_deg=10.0, hpbw_el_deg=10.0)
TRACER = TracerConfig(max_reflections=2, angular_spacing_deg=2.0)


class TestSynthesize:
    def test_pointed_link_noiseless(self, floor_env, office_lib) -> None:
        link = LinkSpec("L1", (0.0, 0.0, 1.5), (10.0, 0.0, 1.5), tx_pointing=(0.0, 0.0), rx_pointing=(180.0, 0.0))
        [record] = synthesize_measurements(floor_env, office_lib, [link], 28.0, tx_antenna=HORN, rx_antenna=HORN, tracer=TRACER)
        assert record.id == "L1"
        assert record.measured_power == pytest.approx(30.0 - fspl(10.0, 28.0), abs=1e-12)
        assert record.tx_hpbw == record.rx_hpbw == 10.0
        assert record.tx_gain == 15.0

    def test_unpointed_link_one_record_per_path(self, truth_lib) -> None:
        link = LinkSpec("L1", (2.0, 3.0, 1.5), (7.5, 5.2, 1.2))
        records = synthesize_measurements(box_room(), truth_lib, [link], 28.0, tx_antenna=HORN, rx_antenna=HORN, tracer=TRACER)
        assert 1 <= len(records) <= 37
        assert records[0].id == "L1-P000"
        assert len({r.id for r in records}) == len(records)

    def test_out_of_beam_record_skipped(self, floor_env, office_lib) -> None:
        link = LinkSpec("L1", (0.0, 0.0, 1.5), (10.0, 0.0, 1.5), tx_pointing=(90.0, 0.0), rx_pointing=(90.0, 0.0))
        assert synthesize_measurements(floor_env, office_lib, [link], 28.0, tx_antenna=HORN, rx_antenna=HORN, tracer=TRACER) == []

    def test_same_seed_same_records(self, truth_lib) -> None:
        links = [LinkSpec("L1", (2.0, 3.0, 1.5), (7.5, 5.2, 1.2))]
        a = synthesize_measurements(box_room(), truth_lib, links, 28.0, tx_antenna=HORN, rx_antenna=HORN, tracer=TRACER, noise_sigma_db=2.5, seed=4)
        b = synthesize_measurements(box_room(), truth_lib, links, 28.0, tx_antenna=HORN, rx_antenna=HORN, tracer=TRACER, noise_sigma_db=2.5, seed=4)
        c = synthesize_measurements(box_room(), truth_lib, links, 28.0, tx_antenna=HORN, rx_antenna=HORN, tracer=TRACER, noise_sigma_db=2.5, seed=5)
        assert a == b
        assert [r.measured_power for r in a] != [r.measured_power for r in c]

    def test_noise_statistics(self) -> None:
        rng = np.random.default_rng(0)
        links = [LinkSpec(f"L{k}", (0.0, 0.0, 0.0), (float(d), 0.0, 0.0)) for k, d in enumerate(rng.uniform(2.0, 50.0, 1000))]
        records = synthesize_measurements(EnvironmentMap("empty"), MaterialLibrary(), links, 28.0, noise_sigma_db=2.5, seed=1)
        assert len(records) == 1000
        noise = np.array([r.measured_power + fspl(r.rx[0], 28.0) for r in records])
        assert 2.3 <= float(np.std(noise, ddof=1)) <= 2.7

    def test_noise_generator_is_pcg64(self) -> None:
        draws = noise_generator(42).normal(0.0, 1.0, 3)
        assert np.array_equal(draws, np.random.Generator(np.random.PCG64(42)).normal(0.0, 1.0, 3))

    def test_negative_sigma(self) -> None:
        with pytest.raises(ValueError):
            synthesize_measurements(EnvironmentMap("empty"), MaterialLibrary(), [], 28.0, noise_sigma_db=-1.0)

    def test_records_carry_delay(self) -> None:
        link = LinkSpec("L1", (0.0, 0.0, 0.0), (3.0, 4.0, 0.0))
        [record] = synthesize_measurements(EnvironmentMap("empty"), truth_library(), [link], 28.0)
        assert record.measured_tof == pytest.approx(5.0 / 0.299792458)
        assert record.id == "L1-P000"
