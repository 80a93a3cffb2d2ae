"""Synthetic directional measurements from a ground-truth material library.

Noise is drawn from numpy's PCG64 bit generator seeded with the run seed, one
normal draw per emitted record in emission order, so a seed fixes the output.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from raycal.calibration.matching import DirectionalMeasurement, MatchGates, angular_offset
from raycal.channel import evaluate_paths, strongest
from raycal.channel.budget import LinkBudget
from raycal.config import AntennaConfig, LinkSpec, TracerConfig, default_bandwidth_ghz
from raycal.geometry import EnvironmentMap
from raycal.materials import MaterialLibrary
from raycal.tracer import trace_paths
from raycal.types import Angles, MultipathComponent, PropagationPath

logger = logging.getLogger("raycal.synth")


def noise_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _antenna(config: Optional[AntennaConfig]) -> Tuple[float, Optional[float], float]:
    if config is None:
        return 0.0, None, -20.0
    hpbw = config.hpbw_az_deg if config.hpbw_az_deg is not None else config.hpbw_el_deg
    return config.boresight_gain_dbi, hpbw, config.floor_db


def _record(
    record_id: str,
    link: LinkSpec,
    frequency: float,
    ptx: float,
    tx_pointing: Angles,
    rx_pointing: Angles,
    tx_antenna: Optional[AntennaConfig],
    rx_antenna: Optional[AntennaConfig],
) -> DirectionalMeasurement:
    tx_gain, tx_hpbw, floor = _antenna(tx_antenna)
    rx_gain, rx_hpbw, _ = _antenna(rx_antenna)
    return DirectionalMeasurement(
        id=record_id,
        tx=link.tx,
        rx=link.rx,
        frequency=frequency,
        ptx=ptx,
        tx_pointing=tx_pointing,
        rx_pointing=rx_pointing,
        tx_gain=tx_gain,
        rx_gain=rx_gain,
        measured_power=0.0,
        tx_hpbw=tx_hpbw,
        rx_hpbw=rx_hpbw,
        floor_db=floor,
    )


def strongest_under(m: DirectionalMeasurement, paths: Sequence[PropagationPath], lib: MaterialLibrary) -> MultipathComponent:
    budget = LinkBudget(m.frequency, m.ptx, m.tx_pattern, m.rx_pattern)
    best = strongest(evaluate_paths(paths, lib, budget, m.tx_pointing, m.rx_pointing))
    assert best is not None
    return best


def _in_gates(m: DirectionalMeasurement, mpc: MultipathComponent, gates: MatchGates) -> bool:
    return (gates.tx_angle_deg is None or angular_offset(m.tx_pointing, mpc.aod) <= gates.tx_angle_deg) and (
        gates.rx_angle_deg is None or angular_offset(m.rx_pointing, mpc.aoa) <= gates.rx_angle_deg
    )


def synthesize_measurements(
    env: EnvironmentMap,
    true_lib: MaterialLibrary,
    links: Sequence[LinkSpec],
    frequency: float,
    ptx_dbm: float = 0.0,
    tx_antenna: Optional[AntennaConfig] = None,
    rx_antenna: Optional[AntennaConfig] = None,
    tracer: Optional[TracerConfig] = None,
    noise_sigma_db: float = 0.0,
    seed: int = 0,
    bandwidth_ghz: Optional[float] = None,
) -> List[DirectionalMeasurement]:
    """One record per pointed link, or per specular path of an unpointed link.

    Each record carries the strongest MPC's power (plus noise) and delay.
    Records whose strongest MPC lies outside the antennas' half-HPBW gates are skipped.
    """
    if noise_sigma_db < 0:
        raise ValueError(f"noise sigma must be >= 0, got {noise_sigma_db}")
    tracer = replace(tracer or TracerConfig(), include_scattering=False)
    bandwidth = bandwidth_ghz or default_bandwidth_ghz(frequency)
    rng = noise_generator(seed)
    records: List[DirectionalMeasurement] = []
    for link in links:
        paths = trace_paths(env, true_lib, link.tx, link.rx, tracer, frequency_ghz=frequency)
        if not paths:
            logger.warning("Link %s has no traced paths", link.link_id, extra={"link_id": link.link_id})
            continue
        if link.tx_pointing is not None or link.rx_pointing is not None:
            pointings = [(link.link_id, link.tx_pointing or (0.0, 0.0), link.rx_pointing or (0.0, 0.0))]
        else:
            pointings = [(f"{link.link_id}-{p.path_id}", p.aod, p.aoa) for p in paths]
        for record_id, tx_pointing, rx_pointing in pointings:
            m = _record(record_id, link, frequency, ptx_dbm, tx_pointing, rx_pointing, tx_antenna, rx_antenna)
            best = strongest_under(m, paths, true_lib)
            if not _in_gates(m, best, MatchGates.for_measurement(m, bandwidth)):
                logger.info("Skipping %s: strongest MPC is outside the beam", record_id, extra={"link_id": link.link_id})
                continue
            noise = float(rng.normal(0.0, noise_sigma_db))
            records.append(replace(m, measured_power=best.power + noise, measured_tof=best.tof))
    logger.info("Synthesized %d records from %d links", len(records), len(links), extra={"n_paths": len(records)})
    return records
