"""Design matrix assembly and the least-squares loss solve."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import lstsq, pinv

from raycal.calibration.matching import DirectionalMeasurement, interaction_counts
from raycal.channel import fspl
from raycal.exceptions import NumericalFailure
from raycal.types import InteractionKind, PropagationPath

logger = logging.getLogger("raycal.calibration")

Match = Tuple[DirectionalMeasurement, PropagationPath]
_KINDS = (InteractionKind.PENETRATION, InteractionKind.REFLECTION)


@dataclass(frozen=True)
class DesignRow:
    weights: Tuple[int, ...]  # [pen_1..pen_N, ref_1..ref_N]
    target: float  # dB
    measurement_id: str
    path: Optional[PropagationPath] = field(default=None, compare=False)

    @property
    def is_los_only(self) -> bool:
        return not any(self.weights)


@dataclass
class LinearSystem:
    """W L = A over the materials touched by the matched paths.

    Columns are ordered penetration-then-reflection per material. Columns no
    row touches are kept here and listed in ``empty_columns``; ``reduced()``
    drops them before solving.
    """

    materials: List[str]
    W: np.ndarray  # (M, 2N) int
    A: np.ndarray  # (M,)
    rows: List[DesignRow]
    validation: List[DesignRow] = field(default_factory=list)

    @property
    def labels(self) -> List[str]:
        return [f"{name}:{kind.value}" for kind in _KINDS for name in self.materials]

    @property
    def columns(self) -> List[Tuple[str, InteractionKind]]:
        return [(name, kind) for kind in _KINDS for name in self.materials]

    @property
    def empty_columns(self) -> List[str]:
        if not len(self.W):
            return list(self.labels)
        return [label for label, used in zip(self.labels, np.any(self.W != 0, axis=0)) if not used]

    def reduced(self) -> Tuple[np.ndarray, np.ndarray, List[Tuple[str, InteractionKind]]]:
        if not len(self.W):
            return self.W, self.A, []
        keep = np.any(self.W != 0, axis=0)
        cols = [c for c, k in zip(self.columns, keep) if k]
        return self.W[:, keep], self.A, cols


def design_target(m: DirectionalMeasurement, path: PropagationPath) -> float:
    """A_j = P_TX + G_T + G_R - FSPL(d_j, f) - P_meas, gains along the path's own angles."""
    return m.ptx + m.gains(path) - fspl(path.path_length, m.frequency) - m.measured_power


def design_row(m: DirectionalMeasurement, path: PropagationPath, materials: Sequence[str]) -> DesignRow:
    index = {name: k for k, name in enumerate(materials)}
    n = len(materials)
    weights = [0] * (2 * n)
    for name, kind in interaction_counts(path):
        weights[index[name] + (n if kind == InteractionKind.REFLECTION else 0)] += 1
    return DesignRow(weights=tuple(weights), target=design_target(m, path), measurement_id=m.id, path=path)


def build_system(matches: Sequence[Match]) -> LinearSystem:
    """Interaction counts and targets for every matched measurement.

    Rows whose path has no interaction at all carry no unknowns and are held out
    as validation rows (their residual is the target itself).
    """
    if not matches:
        raise ValueError("cannot build a system from zero matches")
    materials = sorted({name for _, path in matches for name, _ in interaction_counts(path)})
    rows: List[DesignRow] = []
    validation: List[DesignRow] = []
    for m, path in matches:
        row = design_row(m, path, materials)
        (validation if row.is_los_only else rows).append(row)
    width = 2 * len(materials)
    W = np.array([r.weights for r in rows], dtype=int).reshape(len(rows), width)
    A = np.array([r.target for r in rows], dtype=float)
    return LinearSystem(materials=materials, W=W, A=A, rows=rows, validation=validation)


@dataclass(frozen=True)
class LeastSquaresSolution:
    losses: np.ndarray
    rank: int
    residuals: np.ndarray
    standard_errors: np.ndarray  # nan where the residual variance is undefined
    singular_values: np.ndarray


def solve(W: np.ndarray, A: np.ndarray) -> LeastSquaresSolution:
    """Minimum-norm least-squares solution of W L = A via a rank-revealing SVD solve."""
    W = np.asarray(W, dtype=float)
    A = np.asarray(A, dtype=float)
    if W.ndim != 2 or W.size == 0:
        raise ValueError("design matrix must be a nonempty 2-D array")
    if W.shape[0] != A.shape[0]:
        raise ValueError(f"design matrix has {W.shape[0]} rows but target has {A.shape[0]}")
    if not (np.all(np.isfinite(W)) and np.all(np.isfinite(A))):
        raise NumericalFailure("design matrix or target contains non-finite values")
    losses, _, rank, singular_values = lstsq(W, A, lapack_driver="gelsd")
    rank = int(rank)
    if rank == 0:
        raise NumericalFailure("least-squares system has rank zero")
    if rank < W.shape[1]:
        logger.warning("Rank-deficient system: rank %d for %d unknowns, reporting the minimum-norm solution", rank, W.shape[1])
    residuals = A - W @ losses
    dof = W.shape[0] - rank
    if dof > 0:
        sigma2 = float(residuals @ residuals) / dof
        cov = sigma2 * pinv(W.T @ W)
        standard_errors = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    else:
        standard_errors = np.full(W.shape[1], np.nan)
    return LeastSquaresSolution(
        losses=losses, rank=rank, residuals=residuals, standard_errors=standard_errors, singular_values=np.asarray(singular_values)
    )
