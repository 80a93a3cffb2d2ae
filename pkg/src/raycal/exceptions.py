"""raycal exceptions."""

from __future__ import annotations

from typing import Optional, Sequence, Tuple


class RaycalError(Exception):
    """Base class for all raycal errors."""


class InputError(RaycalError):
    """Raised when an input file or argument cannot be used.

    Carries the offending path and, when known, the 1-based line number so the
    CLI can print ``path:line: message`` diagnostics.
    """

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None) -> None:
        self.message = message
        self.path = path
        self.line = line
        super().__init__(self._render())

    def _render(self) -> str:
        if self.path and self.line:
            return f"{self.path}:{self.line}: {self.message}"
        if self.path:
            return f"{self.path}: {self.message}"
        return self.message


class GeometryError(InputError, ValueError):
    """Raised when a facet or environment map violates its geometric invariants."""


class MissingMaterial(RaycalError, LookupError):
    """Raised when a (name, frequency) pair is not in the material library."""

    def __init__(self, name: str, frequency: float, environment: Optional[str] = None) -> None:
        self.name = name
        self.frequency = frequency
        self.environment = environment
        where = f" ({environment})" if environment else ""
        super().__init__(f"Material not found: {name!r} at {frequency:g} GHz{where}")


class AmbiguousMaterial(MissingMaterial):
    """Raised when several environment rows match a (name, frequency) lookup."""

    def __init__(self, name: str, frequency: float, environments: Sequence[str]) -> None:
        super().__init__(name, frequency)
        self.environments = list(environments)
        self.args = (
            f"Material {name!r} at {frequency:g} GHz is ambiguous; "
            f"select one of the environments {sorted(self.environments)}",
        )


class UncalibratedInteraction(RaycalError):
    """Raised when a path needs a loss value its material does not carry."""

    def __init__(self, material: str, kind: str, frequency: float) -> None:
        self.material = material
        self.kind = kind
        self.frequency = frequency
        super().__init__(f"Material {material!r} has no calibrated {kind} loss at {frequency:g} GHz")


class CalibrationError(RaycalError):
    """Raised when a calibration run cannot produce an estimate."""

    def __init__(self, message: str, gate_failures: Optional[Sequence[Tuple[str, str]]] = None) -> None:
        self.gate_failures = list(gate_failures or [])
        super().__init__(message)


class NumericalFailure(CalibrationError):
    """Raised when the least-squares system has rank zero."""
