"""Command-line driver for tracing, synthesis, calibration and comparison using argparse."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from raycal.config import RunConfig
from raycal.exceptions import InputError, NumericalFailure, RaycalError
from raycal.geometry import EnvironmentMap
from raycal.materials import MaterialLibrary

logger = logging.getLogger("raycal.cli")

EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _load_config(args: argparse.Namespace) -> RunConfig:
    from raycal.formats import load_run_config

    cfg = load_run_config(args.config) if args.config else RunConfig()
    return cfg.with_overrides(
        {"seed": args.seed},
        {
            "max_reflections": args.max_reflections,
            "angular_spacing_deg": args.angular_spacing_deg,
            "max_penetrations": args.max_penetrations,
            "scatter_grid_m": args.scatter_grid_m,
            "strict_materials": True if args.strict_materials else None,
        },
    )


def _out_dir(cfg: RunConfig, args: argparse.Namespace) -> str:
    path = args.out if args.out else cfg.resolve(cfg.output_dir)
    os.makedirs(path, exist_ok=True)
    return path


def _load_world(cfg: RunConfig, materials: Optional[str] = None) -> Tuple[EnvironmentMap, MaterialLibrary]:
    from raycal.formats import load_environment, load_library

    if not cfg.environment:
        raise InputError("no environment configured (set 'environment' in the config file)")
    loaded = load_environment(cfg.resolve(cfg.environment))
    lib_path = cfg.resolve(materials) if materials else (cfg.resolve(cfg.materials) if cfg.materials else loaded.materials_ref)
    if not lib_path:
        raise InputError("no material library configured (set 'materials' or the environment's 'materials_ref')")
    return loaded.env, load_library(lib_path)


def _budget(cfg: RunConfig):
    from raycal.channel import LinkBudget, pattern_from_config

    return LinkBudget(cfg.frequency_ghz, cfg.ptx_dbm, pattern_from_config(cfg.tx_antenna), pattern_from_config(cfg.rx_antenna))


def _link_mpcs(cfg: RunConfig, env: EnvironmentMap, lib: MaterialLibrary, link):
    """Traced paths of one link evaluated directionally when pointed, else omnidirectionally."""
    from raycal.channel import evaluate_paths, omnidirectional_mpcs
    from raycal.config import pointing_or_default
    from raycal.tracer import trace_paths

    paths = trace_paths(env, lib, link.tx, link.rx, cfg.tracer, frequency_ghz=cfg.frequency_ghz)
    if link.tx_pointing is None and link.rx_pointing is None:
        return omnidirectional_mpcs(paths, lib, cfg.frequency_ghz, cfg.ptx_dbm)
    return evaluate_paths(paths, lib, _budget(cfg), pointing_or_default(link.tx_pointing), pointing_or_default(link.rx_pointing))


def cmd_trace(args: argparse.Namespace) -> None:
    from raycal.channel import synthesize_pdp
    from raycal.formats import write_mpcs, write_pdp

    cfg = _load_config(args)
    env, lib = _load_world(cfg)
    out = _out_dir(cfg, args)
    for link in cfg.links:
        mpcs = _link_mpcs(cfg, env, lib, link)
        write_mpcs(os.path.join(out, f"{link.link_id}_mpcs.csv"), mpcs)
        if mpcs:
            write_pdp(os.path.join(out, f"{link.link_id}_pdp.csv"), synthesize_pdp(mpcs, cfg.effective_bandwidth_ghz, cfg.pdp_threshold_db))
        print(f"{link.link_id}: {len(mpcs)} paths")


def cmd_predict(args: argparse.Namespace) -> None:
    from raycal.formats import write_mpcs, write_stats
    from raycal.stats import channel_stats

    cfg = _load_config(args)
    env, lib = _load_world(cfg)
    out = _out_dir(cfg, args)
    stats = []
    for link in cfg.links:
        mpcs = _link_mpcs(cfg, env, lib, link)
        write_mpcs(os.path.join(out, f"{link.link_id}_mpcs.csv"), mpcs)
        if not mpcs:
            logger.warning("Link %s has no paths; no statistics", link.link_id, extra={"link_id": link.link_id})
            continue
        stats.append(channel_stats(mpcs, link.link_id, args.spread))
    write_stats(os.path.join(out, "stats.csv"), stats)
    for s in stats:
        print(f"{s.location_id}: {s.n_mpcs} MPCs, DS {s.rms_delay_spread:.2f} ns, ASA {s.angular_spread_aoa:.2f} deg, ASD {s.angular_spread_aod:.2f} deg")


def cmd_synth(args: argparse.Namespace) -> None:
    from raycal.formats import write_measurements
    from raycal.synth import synthesize_measurements

    cfg = _load_config(args)
    truth = args.true_materials or cfg.true_materials
    env, true_lib = _load_world(cfg, materials=truth)
    sigma = args.noise_sigma if args.noise_sigma is not None else cfg.noise_sigma_db
    records = synthesize_measurements(
        env,
        true_lib,
        cfg.links,
        cfg.frequency_ghz,
        ptx_dbm=cfg.ptx_dbm,
        tx_antenna=cfg.tx_antenna,
        rx_antenna=cfg.rx_antenna,
        tracer=cfg.tracer,
        noise_sigma_db=sigma,
        seed=cfg.seed,
        bandwidth_ghz=cfg.bandwidth_ghz,
    )
    path = args.output or os.path.join(_out_dir(cfg, args), "measurements.csv")
    write_measurements(path, records)
    print(f"Wrote {len(records)} measurements to {path}")


def cmd_calibrate(args: argparse.Namespace) -> None:
    from raycal.calibration import CalibrationConfig, calibrate, residual_statistics
    from raycal.formats import read_measurements, save_library, save_report, write_histogram, write_residuals

    cfg = _load_config(args)
    env, lib = _load_world(cfg)
    source = args.measurements or (cfg.resolve(cfg.measurements) if cfg.measurements else None)
    if not source:
        raise InputError("no measurement file configured (set 'measurements' or pass --measurements)")
    measurements = read_measurements(source)
    if not measurements:
        raise InputError("measurement file has no rows", path=source)
    bands: Dict[float, List] = {}
    for m in measurements:
        bands.setdefault(round(m.frequency, 6), []).append(m)

    calib_cfg = CalibrationConfig(tracer=cfg.tracer, bandwidth_ghz=cfg.bandwidth_ghz)
    results = []
    updated = lib
    for freq in sorted(bands):
        result, updated = calibrate(env, updated, bands[freq], calib_cfg)
        results.append(result)

    out = _out_dir(cfg, args)
    save_report(results, os.path.join(out, "calibration_report.json"))
    save_library(updated, os.path.join(out, "calibrated_materials.json"))
    for result in results:
        tag = f"{result.frequency:g}GHz"
        write_residuals(os.path.join(out, f"residuals_{tag}.csv"), result)
        write_histogram(os.path.join(out, f"residual_histogram_{tag}.csv"), residual_statistics(result))
        print(f"{tag}: rank {result.rank}, {len(result.residuals)} rows, mean {result.mean_error:.3f} dB, std {result.std_error:.3f} dB")
        for label, value in zip(result.labels, result.loss_vector):
            print(f"  {label:<32} {value:8.3f} dB")
        if result.unresolved_materials:
            print(f"  unresolved: {', '.join(result.unresolved_materials)}")


def cmd_compare(args: argparse.Namespace) -> None:
    from raycal.formats import read_stats, write_comparison
    from raycal.stats import compare

    cfg = _load_config(args)
    try:
        comparison = compare(read_stats(args.measured), read_stats(args.simulated))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    write_comparison(os.path.join(_out_dir(cfg, args), "comparison.csv"), comparison)
    for metric, err in comparison.metrics.items():
        print(f"{metric:<20} rel {err.mean_relative_error * 100:+.1f} %  bias {err.bias:+.3f}  mae {err.mean_absolute_error:.3f}")


def cmd_materials(args: argparse.Namespace) -> None:
    from raycal.formats import dump_library
    from raycal.materials import reference_library

    text = dump_library(reference_library(args.environment))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"Wrote reference library to {args.output}")
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="raycal",
        description="raycal: mmWave ray tracing and material loss calibration",
    )
    parser.add_argument("--config", default=None, help="Run configuration JSON file")
    parser.add_argument("--seed", type=int, default=None, help="Seed for synthetic noise")
    parser.add_argument("--out", default=None, help="Output directory")
    parser.add_argument("--strict-materials", action="store_true", help="Abort on uncalibrated materials instead of dropping paths")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--max-reflections", type=int, default=None)
    parser.add_argument("--angular-spacing-deg", type=float, default=None)
    parser.add_argument("--max-penetrations", type=int, default=None)
    parser.add_argument("--scatter-grid-m", type=float, default=None)

    sub = parser.add_subparsers(dest="command")

    # trace
    sub.add_parser("trace", help="Trace every configured link; write MPC and PDP tables")

    # predict
    p = sub.add_parser("predict", help="Trace and compute delay/angular spreads")
    p.add_argument("--spread", choices=["circular", "rms"], default="circular", help="Angular spread definition")

    # synth
    p = sub.add_parser("synth", help="Generate synthetic directional measurements")
    p.add_argument("--true-materials", default=None, help="Ground-truth material library")
    p.add_argument("--noise-sigma", type=float, default=None, help="Gaussian noise std in dB")
    p.add_argument("-o", "--output", default=None, help="Output CSV path")

    # calibrate
    p = sub.add_parser("calibrate", help="Recover material losses from measurements")
    p.add_argument("--measurements", default=None, help="Measurement CSV")

    # compare
    p = sub.add_parser("compare", help="Compare measured and simulated channel statistics")
    p.add_argument("measured", help="Measured stats CSV")
    p.add_argument("simulated", help="Simulated stats CSV")

    # materials
    p = sub.add_parser("materials", help="Export the bundled reference material library")
    p.add_argument("--environment", default=None, help="Only rows for this environment tag")
    p.add_argument("-o", "--output", default=None, help="Output JSON path")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> None:
    from raycal.logging_config import setup_logging

    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        sys.exit(1)

    setup_logging(level="DEBUG" if args.verbose else None)

    handlers = {
        "trace": cmd_trace,
        "predict": cmd_predict,
        "synth": cmd_synth,
        "calibrate": cmd_calibrate,
        "compare": cmd_compare,
        "materials": cmd_materials,
    }
    try:
        handlers[args.command](args)
    except NumericalFailure as exc:
        print(f"Error: {exc}", file=sys.stderr)
        sys.exit(EXIT_NUMERICAL)
    except (RaycalError, ValueError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        failures = getattr(exc, "gate_failures", None)
        if failures:
            for mid, gate in failures:
                print(f"  {mid}: {gate}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


if __name__ == "__main__":
    main()
