"""Calibration report (JSON)."""

from __future__ import annotations

import json
import math
from typing import List, Optional

from raycal.calibration import CalibrationResult, residual_statistics


def _num(value: float) -> Optional[float]:
    return None if not math.isfinite(value) else float(value)


def calibration_report(result: CalibrationResult) -> dict:
    stats = residual_statistics(result) if len(result.residuals) else None
    losses = []
    for label, value, se in zip(result.labels, result.loss_vector, result.standard_errors):
        name, kind = label.rsplit(":", 1)
        losses.append({"material": name, "kind": kind, "loss_db": float(value), "standard_error_db": _num(float(se))})
    return {
        "frequency_ghz": result.frequency,
        "rank": result.rank,
        "n_rows": len(result.residuals),
        "n_validation": result.n_validation,
        "mean_error_db": stats.mean if stats else None,
        "std_error_db": stats.std if stats else None,
        "losses": losses,
        "unresolved_materials": list(result.unresolved_materials),
        "unresolved_columns": list(result.unresolved_columns),
        "unmatched": [{"id": mid, "gate": gate} for mid, gate in result.unmatched],
    }


def dump_report(results: List[CalibrationResult]) -> str:
    return json.dumps({"bands": [calibration_report(r) for r in results]}, indent=2) + "\n"


def save_report(results: List[CalibrationResult], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_report(results))
