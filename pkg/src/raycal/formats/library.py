"""Material library files: a JSON array of material rows."""

from __future__ import annotations

import json
from typing import List

from pydantic import TypeAdapter, ValidationError

from raycal.exceptions import InputError
from raycal.formats.models import MaterialDoc
from raycal.materials import Material, MaterialLibrary

_ROWS = TypeAdapter(List[MaterialDoc])


def parse_library(text: str, path: str = "<library>") -> MaterialLibrary:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno) from exc
    try:
        rows = _ROWS.validate_python(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise InputError(f"{where}: {first['msg']}", path=path) from exc
    try:
        return MaterialLibrary(
            Material(
                name=r.name,
                frequency=r.frequency_ghz,
                environment=r.environment,
                reflection_loss=r.reflection_loss_db,
                penetration_loss=r.penetration_loss_db,
                scattering_coefficient=r.scattering_coefficient,
                scattering_lobe_exponent=r.scattering_lobe_exponent,
            )
            for r in rows
        )
    except ValueError as exc:
        raise InputError(str(exc), path=path) from exc


def load_library(path: str) -> MaterialLibrary:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read material library: {exc.strerror}", path=path) from exc
    return parse_library(text, path)


def material_to_dict(m: Material) -> dict:
    doc: dict = {"name": m.name, "frequency_ghz": m.frequency}
    if m.environment is not None:
        doc["environment"] = m.environment
    if m.reflection_loss is not None:
        doc["reflection_loss_db"] = m.reflection_loss
    if m.penetration_loss is not None:
        doc["penetration_loss_db"] = m.penetration_loss
    doc["scattering_coefficient"] = m.scattering_coefficient
    doc["scattering_lobe_exponent"] = m.scattering_lobe_exponent
    return doc


def dump_library(lib: MaterialLibrary) -> str:
    return json.dumps([material_to_dict(m) for m in lib], indent=2) + "\n"


def save_library(lib: MaterialLibrary, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_library(lib))
