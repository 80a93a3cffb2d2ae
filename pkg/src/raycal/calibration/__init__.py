"""Least-squares recovery of material losses from directional measurements."""

from raycal.calibration.calibrate import CalibrationConfig, CalibrationResult, ResidualStatistics, calibrate, residual_statistics, trace_links
from raycal.calibration.matching import DirectionalMeasurement, MatchGates, angular_offset, match_measurement, modeled_power, screen_paths
from raycal.calibration.system import DesignRow, LeastSquaresSolution, LinearSystem, build_system, design_target, solve

__all__ = [
    "CalibrationConfig",
    "CalibrationResult",
    "DesignRow",
    "DirectionalMeasurement",
    "LeastSquaresSolution",
    "LinearSystem",
    "MatchGates",
    "ResidualStatistics",
    "angular_offset",
    "build_system",
    "calibrate",
    "design_target",
    "match_measurement",
    "modeled_power",
    "residual_statistics",
    "screen_paths",
    "solve",
    "trace_links",
]
