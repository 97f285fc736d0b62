"""Result types produced by the core operations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np

from kg_spectra.models.grid_models import Grid1D
from kg_spectra.models.kg_models import Branch


class Verdict(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"


class LocalizationTag(str, Enum):
    LOCALIZED = "Localized"
    SCATTERING = "Scattering"


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Symmetric tridiagonal discretization of -d^2/dx^2 + V on interior nodes."""

    diagonal: np.ndarray
    off_diagonal: np.ndarray
    grid: Grid1D
    energy: Optional[float] = None

    @property
    def size(self) -> int:
        return int(self.diagonal.size)

    @property
    def inf_norm(self) -> float:
        """Maximum absolute row sum."""
        row = np.abs(self.diagonal).copy()
        row[:-1] += np.abs(self.off_diagonal)
        row[1:] += np.abs(self.off_diagonal)
        return float(row.max())

    @property
    def potential_values(self) -> np.ndarray:
        """Potential samples on the interior nodes (diagonal minus the stencil)."""
        return self.diagonal - 2.0 / self.grid.spacing**2

    def matvec(self, vectors: np.ndarray) -> np.ndarray:
        """Apply the matrix to a vector or to the columns of a matrix."""
        vectors = np.asarray(vectors, dtype=float)
        column = vectors if vectors.ndim == 2 else vectors[:, None]
        out = self.diagonal[:, None] * column
        out[:-1] += self.off_diagonal[:, None] * column[1:]
        out[1:] += self.off_diagonal[:, None] * column[:-1]
        return out if vectors.ndim == 2 else out[:, 0]

    def as_payload(self) -> dict[str, Any]:
        return {
            "size": self.size,
            "inf_norm": self.inf_norm,
            "energy": self.energy,
            "grid": self.grid.as_payload(),
        }


@dataclass(frozen=True)
class LocalizationRecord:
    """Localization diagnostics of one normalized eigenvector.

    ``footprint_fraction`` is only set for comparison solves; it is the mass
    falling inside the footprint of the original (smaller) domain.
    """

    mass_fraction_inner: float
    participation_length: float
    footprint_fraction: Optional[float] = None

    def as_payload(self) -> dict[str, Any]:
        payload = {
            "mass_fraction_inner": self.mass_fraction_inner,
            "participation_length": self.participation_length,
        }
        if self.footprint_fraction is not None:
            payload["footprint_fraction"] = self.footprint_fraction
        return payload


@dataclass(frozen=True, eq=False)
class SpectralResult:
    """Eigenpairs from one discretized solve.

    ``eigenvectors`` holds one column per eigenvalue on the interior nodes,
    normalized so that sum(psi^2) * h == 1. It is ``None`` when the solve only
    kept the localization diagnostics.
    """

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray]
    localization: tuple[LocalizationRecord, ...]
    grid: Grid1D
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def count(self) -> int:
        return int(self.eigenvalues.size)

    def as_payload(self) -> dict[str, Any]:
        return {
            "grid": self.grid.as_payload(),
            "eigenvalues": self.eigenvalues.tolist(),
            "localization": [record.as_payload() for record in self.localization],
            "max_residual": float(self.residuals.max()) if self.residuals.size else 0.0,
        }


@dataclass(frozen=True, eq=False)
class ScanEntry:
    """One eigenvalue of an embedded-eigenvalue scan with its tag.

    ``energy`` is the frozen spectral parameter for energy-dependent potentials.
    """

    eigenvalue: float
    tag: LocalizationTag
    localization: LocalizationRecord
    matched_eigenvalue: Optional[float] = None
    energy: Optional[float] = None
    eigenvector: Optional[np.ndarray] = None

    @property
    def is_localized(self) -> bool:
        return self.tag is LocalizationTag.LOCALIZED

    def as_payload(self) -> dict[str, Any]:
        payload = {
            "eigenvalue": self.eigenvalue,
            "tag": self.tag.value,
            "localization": self.localization.as_payload(),
            "matched_eigenvalue": self.matched_eigenvalue,
        }
        if self.energy is not None:
            payload["energy"] = self.energy
        return payload


@dataclass(frozen=True)
class AsymptoticInfo:
    """Leading large-|x| behaviour V ~ amplitude * sin(frequency * x) / x**decay_power."""

    leading_amplitude: float
    leading_frequency: float
    decay_power: float
    limsup_xdV: float
    numeric_limsup_xdV: Optional[float] = None
    fitted_amplitude: Optional[float] = None
    consistent: bool = True

    def __post_init__(self) -> None:
        if self.decay_power <= 0:
            raise ValueError(f"decay_power must be > 0, got {self.decay_power}")

    def as_payload(self) -> dict[str, Any]:
        return {
            "leading_amplitude": self.leading_amplitude,
            "leading_frequency": self.leading_frequency,
            "decay_power": self.decay_power,
            "limsup_xdV": self.limsup_xdV,
            "numeric_limsup_xdV": self.numeric_limsup_xdV,
            "fitted_amplitude": self.fitted_amplitude,
            "consistent": self.consistent,
        }


@dataclass(frozen=True)
class VnwComparison:
    """Deviation of the printed closed form from the derived potential."""

    x_range: tuple[float, float]
    samples: int
    max_abs_deviation: float
    location: float
    max_relative_deviation: float
    printed_asymptotics: AsymptoticInfo

    def as_payload(self) -> dict[str, Any]:
        return {
            "x_range": list(self.x_range),
            "samples": self.samples,
            "max_abs_deviation": self.max_abs_deviation,
            "location": self.location,
            "max_relative_deviation": self.max_relative_deviation,
            "printed_asymptotics": self.printed_asymptotics.as_payload(),
        }


@dataclass(frozen=True)
class SLambdaValue:
    """Numeric evaluation of S_lambda for one lambda.

    ``value`` is the supremum over the scan grid, a lower bound for the true
    supremum up to ``quadrature_error``. ``upper_bound`` adds the tail of the
    potential outside the window and the Lipschitz gap between grid nodes.
    """

    lam: float
    value: float
    location: float
    tail_bound: float
    quadrature_error: float
    gap_bound: float

    @property
    def upper_bound(self) -> float:
        return self.value + self.quadrature_error + self.tail_bound + self.gap_bound

    @property
    def lower_bound(self) -> float:
        return max(self.value - self.quadrature_error, 0.0)

    def as_payload(self) -> dict[str, Any]:
        return {
            "lambda": self.lam,
            "value": self.value,
            "location": self.location,
            "tail_bound": self.tail_bound,
            "quadrature_error": self.quadrature_error,
            "gap_bound": self.gap_bound,
            "upper_bound": self.upper_bound,
        }


@dataclass(frozen=True)
class SeminormValue:
    """Windowed seminorm N_{alpha,delta}(g) maximized over the scan grid."""

    alpha: float
    delta: float
    value: float
    location: float
    tail_bound: float
    quadrature_error: float

    def as_payload(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "delta": self.delta,
            "value": self.value,
            "location": self.location,
            "tail_bound": self.tail_bound,
            "quadrature_error": self.quadrature_error,
        }


@dataclass(frozen=True)
class ConditionReport:
    """Verdict on one hypothesis together with its numeric witness."""

    condition_id: str
    verdict: Verdict
    witness: Optional[dict[str, Any]] = None
    parameters: dict[str, Any] = field(default_factory=dict)
    tail_bound: Optional[float] = None
    window: Optional[tuple[float, float]] = None

    def __post_init__(self) -> None:
        if self.verdict is Verdict.HOLDS and not self.witness:
            raise ValueError(f"Condition {self.condition_id}: a Holds verdict needs a witness")
        if self.verdict is Verdict.FAILS and not self.witness:
            raise ValueError(
                f"Condition {self.condition_id}: a Fails verdict needs a violating point or value"
            )

    def as_payload(self) -> dict[str, Any]:
        return {
            "condition_id": self.condition_id,
            "verdict": self.verdict.value,
            "witness": self.witness,
            "parameters": self.parameters,
            "tail_bound": self.tail_bound,
            "window": list(self.window) if self.window is not None else None,
        }


@dataclass(frozen=True)
class KGEigenResult:
    """Klein-Gordon energy mapped from a Schrodinger-form eigenvalue."""

    energy: float
    branch: Branch
    schrodinger_value: float
    mass: float
    iteration_trace: tuple[tuple[float, float], ...] = ()
    converged: bool = True
    residual: Optional[float] = None
    caveat: Optional[str] = None
    localization: Optional[LocalizationRecord] = None
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def in_continuum(self) -> bool:
        return abs(self.energy) >= self.mass

    @property
    def mapping_error(self) -> float:
        """|E^2 - m^2 - E~| scaled by 1 + E^2."""
        return abs(self.energy**2 - self.mass**2 - self.schrodinger_value) / (1.0 + self.energy**2)

    def as_payload(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "energy": self.energy,
            "branch": self.branch.value,
            "schrodinger_value": self.schrodinger_value,
            "mass": self.mass,
            "in_continuum": self.in_continuum,
            "converged": self.converged,
            "iterations": len(self.iteration_trace),
        }
        if self.iteration_trace:
            payload["iteration_trace"] = [list(step) for step in self.iteration_trace]
        if self.residual is not None:
            payload["residual"] = self.residual
        if self.caveat:
            payload["caveat"] = self.caveat
        if self.localization is not None:
            payload["localization"] = self.localization.as_payload()
        if self.diagnostics:
            payload["diagnostics"] = dict(self.diagnostics)
        return payload


@dataclass(frozen=True)
class AbsenceRegion:
    """Essential spectrum and the rays proven free of eigenvalues.

    ``forbidden_rays`` are open intervals; a localized energy strictly inside
    one of them contradicts the theorem named by ``theorem_basis``.
    """

    mass: float
    theorem_basis: str
    forbidden_rays: tuple[tuple[float, float], ...]
    forbidden_above: Optional[float] = None
    verdict: Verdict = Verdict.HOLDS
    numeric_limsup_xdV: Optional[float] = None
    supporting: tuple[ConditionReport, ...] = ()

    def __post_init__(self) -> None:
        if self.forbidden_above is not None and self.forbidden_above < self.mass:
            raise ValueError(
                f"forbidden_above ({self.forbidden_above}) must be >= m ({self.mass})"
            )

    @property
    def essential_spectrum(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return (-math.inf, -self.mass), (self.mass, math.inf)

    def forbids(self, energy: float) -> bool:
        return any(low < energy < high for low, high in self.forbidden_rays)

    def as_payload(self) -> dict[str, Any]:
        return {
            "mass": self.mass,
            "essential_spectrum": [list(ray) for ray in self.essential_spectrum],
            "forbidden_rays": [list(ray) for ray in self.forbidden_rays],
            "forbidden_above": self.forbidden_above,
            "theorem_basis": self.theorem_basis,
            "verdict": self.verdict.value,
            "numeric_limsup_xdV": self.numeric_limsup_xdV,
            "supporting": [report.as_payload() for report in self.supporting],
        }


@dataclass(frozen=True)
class AuditReport:
    """Aggregated theorem-level audit for one Klein-Gordon problem."""

    params: dict[str, Any]
    conditions: tuple[ConditionReport, ...]
    spectrum: tuple[KGEigenResult, ...]
    absence: AbsenceRegion
    violations: tuple[dict[str, Any], ...]
    provenance: dict[str, Any]
    bound_states: tuple[KGEigenResult, ...] = ()
    scan: tuple[ScanEntry, ...] = ()

    @property
    def consistent(self) -> bool:
        return not self.violations

    def as_payload(self) -> dict[str, Any]:
        return {
            "params": self.params,
            "conditions": [report.as_payload() for report in self.conditions],
            "spectrum": [result.as_payload() for result in self.spectrum],
            "bound_states": [result.as_payload() for result in self.bound_states],
            "scan": {
                "count": len(self.scan),
                "localized": sum(1 for entry in self.scan if entry.is_localized),
            },
            "absence": self.absence.as_payload(),
            "consistency": {"ok": self.consistent, "violations": list(self.violations)},
            "provenance": self.provenance,
        }
