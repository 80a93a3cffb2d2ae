"""Environment map files (JSON) with file:line diagnostics."""

from __future__ import annotations

import json
import os
import re
from typing import Any, List, NamedTuple, Optional, Tuple

from pydantic import ValidationError

from raycal.exceptions import GeometryError, InputError
from raycal.formats.models import EnvironmentDoc
from raycal.geometry import EnvironmentMap, Facet

_VERTICES_KEY = re.compile(r'"vertices"\s*:')
_INNER_ARRAY = re.compile(r"\[[^\[\]]*\]")


class LoadedEnvironment(NamedTuple):
    env: EnvironmentMap
    materials_ref: Optional[str]  # resolved against the environment file's directory


def _line_of(text: str, offset: int) -> int:
    return text.count("\n", 0, offset) + 1


def facet_line(text: str, facet_index: int, vertex_index: Optional[int] = None) -> Optional[int]:
    """Best-effort source line of a facet's ``vertices`` entry (or one vertex inside it)."""
    keys = list(_VERTICES_KEY.finditer(text))
    if facet_index >= len(keys):
        return None
    start = keys[facet_index].end()
    if vertex_index is None:
        return _line_of(text, keys[facet_index].start())
    arrays = _INNER_ARRAY.finditer(text, start)
    for k, match in enumerate(arrays):
        if k == vertex_index:
            return _line_of(text, match.start())
    return _line_of(text, keys[facet_index].start())


def _error_line(text: str, loc: Tuple[Any, ...]) -> Optional[int]:
    if len(loc) >= 2 and loc[0] == "facets" and isinstance(loc[1], int):
        vertex = loc[3] if len(loc) >= 4 and loc[2] == "vertices" and isinstance(loc[3], int) else None
        return facet_line(text, loc[1], vertex)
    return None


def parse_environment(text: str, path: str = "<environment>") -> LoadedEnvironment:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", path=path, line=exc.lineno) from exc
    try:
        doc = EnvironmentDoc.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = tuple(first["loc"])
        where = ".".join(str(p) for p in loc)
        raise InputError(f"{where}: {first['msg']}", path=path, line=_error_line(text, loc)) from exc
    facets: List[Facet] = []
    for k, f in enumerate(doc.facets):
        try:
            facets.append(Facet(facet_id=f.id, material_id=f.material, vertices=tuple(f.vertices)))
        except GeometryError as exc:
            raise GeometryError(str(exc), path=path, line=facet_line(text, k)) from exc
    try:
        env = EnvironmentMap(name=doc.name, facets=tuple(facets))
    except GeometryError as exc:
        raise GeometryError(str(exc), path=path) from exc
    ref = doc.materials_ref
    if ref is not None and not os.path.isabs(ref):
        ref = os.path.join(os.path.dirname(path), ref)
    return LoadedEnvironment(env=env, materials_ref=ref)


def load_environment(path: str) -> LoadedEnvironment:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read environment: {exc.strerror}", path=path) from exc
    return parse_environment(text, path)


def environment_to_dict(env: EnvironmentMap, materials_ref: Optional[str] = None) -> dict:
    doc: dict = {"name": env.name}
    if materials_ref is not None:
        doc["materials_ref"] = materials_ref
    doc["facets"] = [{"id": f.facet_id, "material": f.material_id, "vertices": [list(v) for v in f.vertices]} for f in env.facets]
    return doc


def save_environment(env: EnvironmentMap, path: str, materials_ref: Optional[str] = None) -> None:
    """Write *env* as JSON; floats use their shortest round-trip representation."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(environment_to_dict(env, materials_ref), fh, indent=2)
        fh.write("\n")
