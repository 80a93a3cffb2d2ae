"""File formats: JSON documents (environment, library, run config, report) and CSV tables."""

from raycal.formats.environment import LoadedEnvironment, load_environment, parse_environment, save_environment
from raycal.formats.library import dump_library, load_library, parse_library, save_library
from raycal.formats.report import calibration_report, dump_report, save_report
from raycal.formats.runconfig import load_run_config, run_config_from_doc
from raycal.formats.tables import (
    read_measurements,
    read_mpcs,
    read_stats,
    write_comparison,
    write_histogram,
    write_measurements,
    write_mpcs,
    write_pdp,
    write_residuals,
    write_stats,
)

__all__ = [
    "LoadedEnvironment",
    "calibration_report",
    "dump_library",
    "dump_report",
    "load_environment",
    "load_library",
    "load_run_config",
    "parse_environment",
    "parse_library",
    "read_measurements",
    "read_mpcs",
    "read_stats",
    "run_config_from_doc",
    "save_environment",
    "save_library",
    "save_report",
    "write_comparison",
    "write_histogram",
    "write_measurements",
    "write_mpcs",
    "write_pdp",
    "write_residuals",
    "write_stats",
]
