"""Run configuration file loading."""

from __future__ import annotations

import json
import os

from pydantic import ValidationError

from raycal.config import AntennaConfig, LinkSpec, RunConfig, TracerConfig
from raycal.exceptions import InputError
from raycal.formats.models import AntennaDoc, RunConfigDoc


def _antenna(doc: AntennaDoc) -> AntennaConfig:
    return AntennaConfig(
        boresight_gain_dbi=doc.boresight_gain_dbi, hpbw_az_deg=doc.hpbw_az_deg, hpbw_el_deg=doc.hpbw_el_deg, floor_db=doc.floor_db
    )


def run_config_from_doc(doc: RunConfigDoc, base_dir: str = ".") -> RunConfig:
    return RunConfig(
        environment=doc.environment,
        materials=doc.materials,
        measurements=doc.measurements,
        true_materials=doc.true_materials,
        frequency_ghz=doc.frequency_ghz,
        bandwidth_ghz=doc.bandwidth_ghz,
        ptx_dbm=doc.ptx_dbm,
        tracer=TracerConfig(**doc.tracer.model_dump()),
        tx_antenna=_antenna(doc.tx_antenna) if doc.tx_antenna else None,
        rx_antenna=_antenna(doc.rx_antenna) if doc.rx_antenna else None,
        links=[LinkSpec(link_id=link.id, tx=link.tx, rx=link.rx, tx_pointing=link.tx_pointing, rx_pointing=link.rx_pointing) for link in doc.links],
        pdp_threshold_db=doc.pdp_threshold_db,
        output_dir=doc.output_dir,
        seed=doc.seed,
        noise_sigma_db=doc.noise_sigma_db,
        base_dir=base_dir,
    )


def load_run_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read config: {exc.strerror}", path=path) from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno) from exc
    try:
        doc = RunConfigDoc.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise InputError(f"{where}: {first['msg']}", path=path) from exc
    return run_config_from_doc(doc, base_dir=os.path.dirname(os.path.abspath(path)))
