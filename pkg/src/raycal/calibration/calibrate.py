"""End-to-end material calibration from directional measurements."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from raycal.calibration.matching import DirectionalMeasurement, MatchGates, match_measurement, screen_paths
from raycal.calibration.system import LinearSystem, build_system, solve
from raycal.config import TracerConfig, default_bandwidth_ghz
from raycal.exceptions import CalibrationError
from raycal.geometry import EnvironmentMap
from raycal.materials import MaterialLibrary
from raycal.materials.library import LossKey
from raycal.tracer import trace_paths
from raycal.types import InteractionKind, Point3, PropagationPath

logger = logging.getLogger("raycal.calibration")


@dataclass(frozen=True)
class CalibrationConfig:
    tracer: TracerConfig = field(default_factory=lambda: TracerConfig(include_scattering=False))
    bandwidth_ghz: Optional[float] = None
    # Overrides the per-antenna half-HPBW angle gate when set.
    angle_gate_deg: Optional[float] = None


@dataclass
class CalibrationResult:
    frequency: float
    labels: List[str]
    loss_vector: np.ndarray
    standard_errors: np.ndarray
    residuals: np.ndarray  # system rows then validation rows
    measurement_ids: List[str]
    rank: int
    unresolved_materials: List[str]
    unresolved_columns: List[str] = field(default_factory=list)
    n_validation: int = 0
    unmatched: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def mean_error(self) -> float:
        return float(np.mean(self.residuals))

    @property
    def std_error(self) -> float:
        return float(np.std(self.residuals))

    @property
    def estimates(self) -> Dict[LossKey, float]:
        out: Dict[LossKey, float] = {}
        for label, value in zip(self.labels, self.loss_vector):
            name, kind = label.rsplit(":", 1)
            out[(name, InteractionKind(kind))] = float(value)
        return out

    @property
    def validation_residuals(self) -> np.ndarray:
        return self.residuals[len(self.residuals) - self.n_validation :]


@dataclass(frozen=True)
class ResidualStatistics:
    mean: float
    std: float
    histogram: List[Tuple[float, float, int]]  # [lo, hi) dB of |residual|, count


def residual_statistics(result: CalibrationResult) -> ResidualStatistics:
    """Signed mean, population std and a 1 dB histogram of |residual|."""
    r = np.asarray(result.residuals, dtype=float)
    if r.size == 0:
        raise ValueError("no residuals to summarize")
    magnitude = np.abs(r)
    n_bins = int(math.floor(float(magnitude.max()))) + 1
    counts = np.bincount(np.floor(magnitude).astype(int), minlength=n_bins)
    histogram = [(float(k), float(k + 1), int(c)) for k, c in enumerate(counts)]
    return ResidualStatistics(mean=float(np.mean(r)), std=float(np.std(r)), histogram=histogram)


def _single_band(measurements: Sequence[DirectionalMeasurement]) -> float:
    bands = sorted({round(m.frequency, 6) for m in measurements})
    if len(bands) != 1:
        raise CalibrationError(f"measurements span several bands {bands}; calibrate one band at a time")
    return float(bands[0])


def trace_links(
    env: EnvironmentMap,
    measurements: Sequence[DirectionalMeasurement],
    frequency: float,
    tracer: TracerConfig,
) -> Dict[Tuple[Point3, Point3], List[PropagationPath]]:
    """Trace once per unique (tx, rx) with unit-loss placeholders; geometry does not depend on losses."""
    placeholder = MaterialLibrary.placeholder(env.material_ids, frequency)
    traced: Dict[Tuple[Point3, Point3], List[PropagationPath]] = {}
    for m in measurements:
        key = (m.tx, m.rx)
        if key not in traced:
            traced[key] = trace_paths(env, placeholder, m.tx, m.rx, tracer, frequency_ghz=frequency)
    return traced


def calibrate(
    env: EnvironmentMap,
    lib_initial: MaterialLibrary,
    measurements: Sequence[DirectionalMeasurement],
    config: Optional[CalibrationConfig] = None,
) -> Tuple[CalibrationResult, MaterialLibrary]:
    """Match, build and solve; returns the result and *lib_initial* with the recovered losses written in."""
    config = config or CalibrationConfig()
    if not measurements:
        raise CalibrationError("no measurements to calibrate")
    frequency = _single_band(measurements)
    lib_initial.validate_for(env.material_ids, frequency)
    bandwidth = config.bandwidth_ghz or default_bandwidth_ghz(frequency)
    ranking = lib_initial.with_placeholder_losses()

    traced = trace_links(env, measurements, frequency, config.tracer)
    matches = []
    unmatched: List[Tuple[str, str]] = []
    for m in measurements:
        paths = traced[(m.tx, m.rx)]
        gates = MatchGates.for_measurement(m, bandwidth, config.angle_gate_deg)
        path = match_measurement(m, paths, gates, ranking)
        if path is None:
            _, reason = screen_paths(m, paths, gates)
            unmatched.append((m.id, reason or "unknown"))
            logger.warning("Measurement %s matched no traced path (%s gate)", m.id, reason, extra={"measurement_id": m.id})
            continue
        matches.append((m, path))
    if not matches:
        raise CalibrationError(f"none of {len(measurements)} measurements matched a traced path", gate_failures=unmatched)

    system = build_system(matches)
    result = _solve_system(system, frequency, env.material_ids)
    result.unmatched = unmatched
    updated = lib_initial.with_losses(frequency, result.estimates)
    logger.info(
        "Calibrated %d unknowns from %d rows (%d validation): mean %.3f dB, std %.3f dB",
        len(result.labels),
        len(result.residuals),
        result.n_validation,
        result.mean_error,
        result.std_error,
    )
    return result, updated


def _solve_system(system: LinearSystem, frequency: float, env_materials: Sequence[str]) -> CalibrationResult:
    W, A, columns = system.reduced()
    validation = np.array([r.target for r in system.validation], dtype=float)
    ids = [r.measurement_id for r in system.rows] + [r.measurement_id for r in system.validation]
    if not columns:
        logger.warning("Every matched path is interaction-free; nothing to calibrate")
        return CalibrationResult(
            frequency=frequency,
            labels=[],
            loss_vector=np.zeros(0),
            standard_errors=np.zeros(0),
            residuals=validation,
            measurement_ids=ids,
            rank=0,
            unresolved_materials=sorted(env_materials),
            unresolved_columns=system.empty_columns,
            n_validation=len(validation),
        )
    solution = solve(W, A)
    labels = [f"{name}:{kind.value}" for name, kind in columns]
    for label, value in zip(labels, solution.losses):
        if value < 0:
            logger.warning("Negative loss estimate %.3f dB for %s indicates model mismatch", value, label, extra={"material": label})
    resolved = {name for name, _ in columns}
    return CalibrationResult(
        frequency=frequency,
        labels=labels,
        loss_vector=solution.losses,
        standard_errors=solution.standard_errors,
        residuals=np.concatenate([solution.residuals, validation]),
        measurement_ids=ids,
        rank=solution.rank,
        unresolved_materials=sorted(set(env_materials) - resolved),
        unresolved_columns=system.empty_columns,
        n_validation=len(validation),
    )
