"""Shared pre/post-processing for every path finder: endpoint checks, loss checks, dedupe, ordering."""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from raycal.exceptions import GeometryError, MissingMaterial, UncalibratedInteraction
from raycal.geometry import EnvironmentMap
from raycal.materials import MaterialLibrary
from raycal.types import InteractionKind, Point3, PropagationPath, as_point

logger = logging.getLogger("raycal.tracer")

# Endpoints closer than this to a facet are rejected (metres).
ENDPOINT_CLEARANCE = 1e-6
# Coordinates are compared at this many decimals when collapsing coincident paths.
_DEDUPE_DECIMALS = 6
FREQUENCY_REQUIRED = "frequency_ghz is required when the material library spans several bands"


def resolve_frequency(lib: MaterialLibrary, frequency_ghz: Optional[float]) -> Optional[float]:
    """The band to look losses up in; inferred when the library holds a single band."""
    if frequency_ghz is not None:
        if frequency_ghz <= 0:
            raise ValueError(f"frequency must be positive, got {frequency_ghz}")
        return float(frequency_ghz)
    freqs = lib.frequencies
    if len(freqs) == 1:
        return freqs[0]
    return None


def check_endpoints(env: EnvironmentMap, tx: Sequence[float], rx: Sequence[float]) -> Tuple[Point3, Point3]:
    tx_p, rx_p = as_point(tx), as_point(rx)
    if np.linalg.norm(np.subtract(tx_p, rx_p)) <= ENDPOINT_CLEARANCE:
        raise GeometryError(f"tx and rx coincide at {tx_p}")
    for label, p in (("tx", tx_p), ("rx", rx_p)):
        for facet in env.facets:
            if abs(facet.signed_distance(p)) <= ENDPOINT_CLEARANCE and facet.contains(p, ENDPOINT_CLEARANCE):
                raise GeometryError(f"{label} {p} lies on facet {facet.facet_id!r}")
    return tx_p, rx_p


def require_losses(path: PropagationPath, lib: MaterialLibrary, frequency: Optional[float]) -> None:
    """Raise if any interaction on *path* needs a loss the library does not hold."""
    if not path.interactions:
        return
    if frequency is None:
        raise ValueError(FREQUENCY_REQUIRED)
    for inter in path.interactions:
        material = lib.lookup(inter.material_id, frequency)
        if inter.kind == InteractionKind.SCATTERING:
            if material.scattering_coefficient <= 0.0:
                raise UncalibratedInteraction(inter.material_id, inter.kind.value, frequency)
        elif material.loss(inter.kind) is None:
            raise UncalibratedInteraction(inter.material_id, inter.kind.value, frequency)


def _geometry_key(path: PropagationPath) -> Tuple:
    return tuple((i.kind.value, tuple(np.round(i.point, _DEDUPE_DECIMALS) + 0.0)) for i in path.interactions)


def _order_key(path: PropagationPath) -> Tuple:
    return tuple((i.facet_id, i.kind.value) for i in path.interactions)


def finalize_paths(
    paths: Sequence[PropagationPath],
    lib: MaterialLibrary,
    frequency: Optional[float],
    strict: bool = False,
) -> List[PropagationPath]:
    """Drop uncalibrated paths, collapse coincident ones, sort by length and assign ids.

    In strict mode a missing material or loss aborts instead of dropping the path.
    """
    kept: Dict[Tuple, PropagationPath] = {}
    for path in paths:
        try:
            require_losses(path, lib, frequency)
        except (MissingMaterial, UncalibratedInteraction) as exc:
            if strict:
                raise
            logger.warning("Dropping path %s: %s", path.chain or "los", exc)
            continue
        key = _geometry_key(path)
        current = kept.get(key)
        if current is None or _order_key(path) < _order_key(current):
            kept[key] = path
    ordered = sorted(kept.values(), key=lambda p: (round(p.path_length, 9), _order_key(p)))
    return [replace(p, path_id=f"P{k:03d}") for k, p in enumerate(ordered)]
