"""CSV tables: measurements, MPCs, PDPs, channel statistics and calibration outputs."""

from __future__ import annotations

import csv
import math
from typing import Dict, Iterable, List, Optional, Sequence

from raycal.calibration import CalibrationResult, DirectionalMeasurement, ResidualStatistics
from raycal.channel import PowerDelayProfile
from raycal.exceptions import InputError
from raycal.stats import ChannelStats, Comparison
from raycal.types import MultipathComponent

MEASUREMENT_COLUMNS = [
    "id", "tx_x", "tx_y", "tx_z", "rx_x", "rx_y", "rx_z", "f_ghz", "ptx_dbm", "tx_az", "tx_el", "rx_az", "rx_el",
    "tx_gain_dbi", "tx_hpbw_deg", "rx_gain_dbi", "rx_hpbw_deg", "meas_power_dbm", "meas_tof_ns",
]  # fmt: skip
MPC_COLUMNS = [
    "path_id", "power_dbm", "tof_ns", "aod_az", "aod_el", "aoa_az", "aoa_el", "n_reflections", "n_penetrations", "n_scatter",
    "interaction_chain",
]  # fmt: skip
PDP_COLUMNS = ["delay_ns", "power_dbm"]
STATS_COLUMNS = ["location_id", "n_mpcs", "total_power_dbm", "rms_ds_ns", "as_aoa_deg", "as_aod_deg"]
COMPARISON_COLUMNS = ["location_id", "metric", "measured", "simulated", "relative_error"]
HISTOGRAM_COLUMNS = ["abs_error_lo_db", "abs_error_hi_db", "count"]
RESIDUAL_COLUMNS = ["measurement_id", "role", "residual_db"]


def fmt(value: Optional[float]) -> str:
    """Shortest round-trip text for a float; empty for None."""
    if value is None:
        return ""
    return repr(float(value))


def _write(path: str, columns: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(row)


def _read(path: str, columns: Sequence[str]) -> List[Dict[str, str]]:
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read table: {exc.strerror}", path=path) from exc
    with fh:
        reader = csv.DictReader(fh)
        header = [h.strip() for h in (reader.fieldnames or [])]
        missing = [c for c in columns if c not in header]
        if missing:
            raise InputError(f"missing columns {missing}", path=path, line=1)
        reader.fieldnames = header
        rows = []
        for row in reader:
            row = {k: (v or "").strip() for k, v in row.items() if k is not None}
            row["__line__"] = str(reader.line_num)
            rows.append(row)
        return rows


def _float(row: Dict[str, str], key: str, path: str, optional: bool = False) -> Optional[float]:
    text = row.get(key, "")
    if text == "" and optional:
        return None
    try:
        value = float(text)
    except ValueError:
        raise InputError(f"column {key!r}: expected a number, got {text!r}", path=path, line=int(row["__line__"])) from None
    if not math.isfinite(value) and not optional:
        raise InputError(f"column {key!r}: value must be finite", path=path, line=int(row["__line__"]))
    return value


# ── Measurements ────────────────────────────────────────────────────


def read_measurements(path: str) -> List[DirectionalMeasurement]:
    out: List[DirectionalMeasurement] = []
    for row in _read(path, MEASUREMENT_COLUMNS):

        def f(key: str, optional: bool = False) -> Optional[float]:
            return _float(row, key, path, optional)

        out.append(
            DirectionalMeasurement(
                id=row["id"],
                tx=(f("tx_x"), f("tx_y"), f("tx_z")),
                rx=(f("rx_x"), f("rx_y"), f("rx_z")),
                frequency=f("f_ghz"),
                ptx=f("ptx_dbm"),
                tx_pointing=(f("tx_az"), f("tx_el")),
                rx_pointing=(f("rx_az"), f("rx_el")),
                tx_gain=f("tx_gain_dbi"),
                rx_gain=f("rx_gain_dbi"),
                measured_power=f("meas_power_dbm"),
                measured_tof=f("meas_tof_ns", optional=True),
                tx_hpbw=f("tx_hpbw_deg", optional=True),
                rx_hpbw=f("rx_hpbw_deg", optional=True),
            )
        )
    return out


def write_measurements(path: str, measurements: Iterable[DirectionalMeasurement]) -> None:
    _write(
        path,
        MEASUREMENT_COLUMNS,
        (
            [m.id, *map(fmt, m.tx), *map(fmt, m.rx), fmt(m.frequency), fmt(m.ptx), *map(fmt, m.tx_pointing), *map(fmt, m.rx_pointing),
             fmt(m.tx_gain), fmt(m.tx_hpbw), fmt(m.rx_gain), fmt(m.rx_hpbw), fmt(m.measured_power), fmt(m.measured_tof)]
            for m in measurements
        ),
    )  # fmt: skip


# ── MPCs and PDPs ───────────────────────────────────────────────────


def write_mpcs(path: str, mpcs: Iterable[MultipathComponent]) -> None:
    rows = []
    for m in mpcs:
        p = m.path
        rows.append(
            [
                p.path_id if p else "",
                fmt(m.power),
                fmt(m.tof),
                fmt(m.aod[0]),
                fmt(m.aod[1]),
                fmt(m.aoa[0]),
                fmt(m.aoa[1]),
                p.n_reflections if p else 0,
                p.n_penetrations if p else 0,
                p.n_scatter if p else 0,
                p.chain if p else "",
            ]
        )
    _write(path, MPC_COLUMNS, rows)


def read_mpcs(path: str) -> List[MultipathComponent]:
    return [
        MultipathComponent(
            power=_float(r, "power_dbm", path),
            tof=_float(r, "tof_ns", path),
            aod=(_float(r, "aod_az", path), _float(r, "aod_el", path)),
            aoa=(_float(r, "aoa_az", path), _float(r, "aoa_el", path)),
        )
        for r in _read(path, MPC_COLUMNS)
    ]


def write_pdp(path: str, pdp: PowerDelayProfile) -> None:
    _write(path, PDP_COLUMNS, ([fmt(d), fmt(p)] for d, p in zip(pdp.delays, pdp.powers_dbm)))


# ── Statistics ──────────────────────────────────────────────────────


def write_stats(path: str, stats: Iterable[ChannelStats]) -> None:
    _write(
        path,
        STATS_COLUMNS,
        ([s.location_id, s.n_mpcs, fmt(s.total_power), fmt(s.rms_delay_spread), fmt(s.angular_spread_aoa), fmt(s.angular_spread_aod)] for s in stats),
    )


def read_stats(path: str) -> List[ChannelStats]:
    out = []
    for r in _read(path, STATS_COLUMNS):
        try:
            n_mpcs = int(r["n_mpcs"])
        except ValueError:
            raise InputError(f"column 'n_mpcs': expected an integer, got {r['n_mpcs']!r}", path=path, line=int(r["__line__"])) from None
        out.append(
            ChannelStats(
                location_id=r["location_id"],
                n_mpcs=n_mpcs,
                total_power=_float(r, "total_power_dbm", path),
                rms_delay_spread=_float(r, "rms_ds_ns", path),
                angular_spread_aoa=_float(r, "as_aoa_deg", path),
                angular_spread_aod=_float(r, "as_aod_deg", path),
            )
        )
    return out


def write_comparison(path: str, comparison: Comparison) -> None:
    _write(
        path,
        COMPARISON_COLUMNS,
        ([r.location_id, r.metric, fmt(r.measured), fmt(r.simulated), fmt(r.relative_error)] for r in comparison.rows),
    )


# ── Calibration outputs ─────────────────────────────────────────────


def write_histogram(path: str, stats: ResidualStatistics) -> None:
    _write(path, HISTOGRAM_COLUMNS, ([fmt(lo), fmt(hi), count] for lo, hi, count in stats.histogram))


def write_residuals(path: str, result: CalibrationResult) -> None:
    n_system = len(result.residuals) - result.n_validation
    _write(
        path,
        RESIDUAL_COLUMNS,
        ([mid, "system" if k < n_system else "validation", fmt(r)] for k, (mid, r) in enumerate(zip(result.measurement_ids, result.residuals))),
    )
