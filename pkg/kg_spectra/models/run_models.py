"""Pydantic input models for the command-line subcommands.

One model per subcommand; each turns its flags into the validated domain
objects (:class:`PotentialSpec`, :class:`Grid1D`, :class:`KGParams`) the core
operations consume.
"""

from __future__ import annotations

import itertools
from pathlib import Path
from typing import Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from kg_spectra.config import SETTINGS
from kg_spectra.models.base import BaseRunInput, parse_window
from kg_spectra.models.grid_models import Grid1D
from kg_spectra.models.kg_models import Branch, KGParams, PureElectric, PureScalar
from kg_spectra.models.potential_models import PotentialSpec

_VNW = SETTINGS.vnw
_RADIAL = SETTINGS.radial
_QUAD = SETTINGS.quadrature
_COND = SETTINGS.conditions


def _vnw_spec(formula: str, eigenvalue: float) -> PotentialSpec:
    if formula == "printed":
        return PotentialSpec.vnw_printed()
    return PotentialSpec.vnw_derived(eigenvalue)


class VerifyVnwInput(BaseRunInput):
    """Input for ``verify-vnw``: embedded eigenvalue of the 1D scalar vNW problem.

    Examples:
        >>> VerifyVnwInput(window="0.5,1.5", h=0.005)
        >>> VerifyVnwInput(window=(17, 30))
    """

    eigenvalue: float = Field(
        _VNW.eigenvalue, description="Schrodinger eigenvalue E0 the derived potential is built for."
    )
    x_min: float = Field(_VNW.x_min, description="Left end of the truncated line.")
    x_max: float = Field(_VNW.x_max, description="Right end of the truncated line.")
    h: float = Field(_VNW.h, gt=0, description="Grid spacing.")
    window: tuple[float, float] = Field(
        _VNW.window, description="Schrodinger eigenvalue window 'lo,hi' (half-open (lo, hi]).",
        examples=["0.5,1.5", "17,30"],
    )
    tolerance: float = Field(
        _VNW.tolerance, gt=0, description="Acceptance tolerance on |E~ - E0|."
    )
    formula: Literal["derived", "printed"] = Field(
        _VNW.formula, description="Potential variant: 'derived' (canonical) or 'printed'."
    )

    @field_validator("window", mode="before")
    @classmethod
    def validate_window(cls, v: object) -> tuple[float, float]:
        return parse_window(v)

    @model_validator(mode="after")
    def validate_grid(self) -> "VerifyVnwInput":
        """The grid must hold at least one interior node."""
        if not self.x_min < self.x_max:
            raise ValueError(f"--xmin must be < --xmax, got {self.x_min} and {self.x_max}")
        if self.h >= (self.x_max - self.x_min) / 2:
            raise ValueError(
                f"--h {self.h} leaves no interior node on [{self.x_min}, {self.x_max}]"
            )
        return self

    def to_spec(self) -> PotentialSpec:
        return _vnw_spec(self.formula, self.eigenvalue)

    def to_params(self) -> KGParams:
        return KGParams(mass=self.mass, interaction=PureScalar(potential=self.to_spec()))

    def to_grid(self) -> Grid1D:
        return Grid1D.from_spacing(self.x_min, self.x_max, self.h)


class CheckConditionsInput(BaseRunInput):
    """Input for ``check-conditions``: condition I and the seminorm memberships.

    Examples:
        >>> CheckConditionsInput(potential="square_well", depth=5.0, half_width=1.0)
        >>> CheckConditionsInput(potential="zero")
    """

    potential: Literal["vnw_derived", "vnw_printed", "square_well", "zero"] = Field(
        "vnw_derived", description="Potential whose hypotheses are checked."
    )
    eigenvalue: float = Field(_VNW.eigenvalue, description="E0 for the derived vNW potential.")
    depth: float = Field(5.0, gt=0, description="Square-well depth V0 (square_well only).")
    half_width: float = Field(1.0, gt=0, description="Square-well half-width a (square_well only).")
    tolerance: float = Field(_QUAD.tolerance, gt=0, description="Quadrature tolerance.")
    lambda_points: int = Field(_COND.lambda_points, ge=1, description="Points in the lambda grid.")
    lambda_min: float = Field(_COND.lambda_min, gt=0, description="Smallest lambda of the grid.")
    scan_window: tuple[float, float] = Field(
        _QUAD.scan_window, description="Window 'lo,hi' over which suprema are scanned."
    )

    @field_validator("scan_window", mode="before")
    @classmethod
    def validate_scan_window(cls, v: object) -> tuple[float, float]:
        return parse_window(v)

    @model_validator(mode="after")
    def validate_lambda_range(self) -> "CheckConditionsInput":
        """lambda_min must sit below m^2."""
        if self.lambda_min >= self.mass**2:
            raise ValueError(
                f"lambda_min ({self.lambda_min}) must be < m^2 ({self.mass**2}); "
                "condition I is scanned over 0 < lambda < m^2"
            )
        return self

    def to_spec(self) -> PotentialSpec:
        if self.potential == "square_well":
            return PotentialSpec.square_well(self.depth, self.half_width)
        if self.potential == "zero":
            return PotentialSpec.zero()
        if self.potential == "vnw_printed":
            return PotentialSpec.vnw_printed()
        return PotentialSpec.vnw_derived(self.eigenvalue)


class CoulombInput(BaseRunInput):
    """Input for ``coulomb``: pure electric Coulomb interaction in 3D (radial).

    Examples:
        >>> CoulombInput(charge=-0.1, ell=0)
        >>> CoulombInput(charge=0.1, window="0,20")
    """

    charge: float = Field(_RADIAL.charge, description="Coulomb charge e; |e| < 1/(2 sqrt 17).")
    ell: int = Field(_RADIAL.ell, ge=0, description="Angular momentum quantum number.")
    r_min: float = Field(_RADIAL.r_min, gt=0, description="Inner Dirichlet radius.")
    r_max: float = Field(_RADIAL.r_max, gt=0, description="Outer Dirichlet radius.")
    h: float = Field(_RADIAL.h, gt=0, description="Radial grid spacing.")
    window: tuple[float, float] = Field(
        _RADIAL.window, description="Continuum window 'lo,hi' in E~ scanned for embedded states."
    )
    r0: float = Field(_RADIAL.r0, gt=0, description="Radius R0 beyond which Simon (d), (e) are checked.")
    tolerance: float = Field(
        SETTINGS.fixed_point.tolerance, gt=0, description="Fixed-point stopping tolerance."
    )
    far_field_tolerance: float = Field(
        _RADIAL.far_field_tolerance, gt=0, description="Bound on |V1| over the outer decade."
    )
    energy_slices: int = Field(
        _RADIAL.energy_slices, ge=1, description="Slices with frozen spectral parameter."
    )

    @field_validator("window", mode="before")
    @classmethod
    def validate_window(cls, v: object) -> tuple[float, float]:
        return parse_window(v)

    @model_validator(mode="after")
    def validate_radii(self) -> "CoulombInput":
        """Require r_min < R0 < r_max."""
        if not self.r_min < self.r0 < self.r_max:
            raise ValueError(
                f"Need r_min < r0 < r_max, got r_min={self.r_min}, r0={self.r0}, r_max={self.r_max}"
            )
        return self

    def to_params(self) -> KGParams:
        spec = PotentialSpec.coulomb(self.charge, self.ell)
        return KGParams(mass=self.mass, dimension=3, interaction=PureElectric(potential=spec))

    def to_grid(self) -> Grid1D:
        return Grid1D.from_spacing(self.r_min, self.r_max, self.h, radial=True)

    @property
    def bound_branch(self) -> Optional[Branch]:
        """Branch on which the Coulomb term is attractive; None when e == 0."""
        if self.charge < 0:
            return Branch.POSITIVE
        if self.charge > 0:
            return Branch.NEGATIVE
        return None

    @property
    def forbidden_branch(self) -> Branch:
        """Branch whose continuum ray carries no eigenvalue for this charge sign."""
        return Branch.NEGATIVE if self.charge > 0 else Branch.POSITIVE


class SweepPoint(BaseModel):
    """One point of a parameter sweep.

    Unset grid fields fall back to the vNW defaults (line) or the radial
    defaults (Coulomb).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    interaction: Literal["vnw", "zero", "square_well", "coulomb"] = "vnw"
    mass: float = Field(1.0, gt=0)
    formula: Literal["derived", "printed"] = "derived"
    eigenvalue: float = 1.0
    charge: float = _RADIAL.charge
    ell: int = Field(0, ge=0)
    depth: float = Field(5.0, gt=0)
    half_width: float = Field(1.0, gt=0)
    h: Optional[float] = Field(None, gt=0)
    x_min: Optional[float] = None
    x_max: Optional[float] = None
    window: Optional[tuple[float, float]] = None

    @field_validator("window", mode="before")
    @classmethod
    def validate_window(cls, v: object) -> Optional[tuple[float, float]]:
        return None if v is None else parse_window(v)

    @property
    def is_radial(self) -> bool:
        return self.interaction == "coulomb"

    def to_params(self) -> KGParams:
        if self.interaction == "coulomb":
            spec = PotentialSpec.coulomb(self.charge, self.ell)
            return KGParams(mass=self.mass, dimension=3, interaction=PureElectric(potential=spec))
        if self.interaction == "zero":
            spec = PotentialSpec.zero()
        elif self.interaction == "square_well":
            spec = PotentialSpec.square_well(self.depth, self.half_width)
        else:
            spec = _vnw_spec(self.formula, self.eigenvalue)
        return KGParams(mass=self.mass, interaction=PureScalar(potential=spec))

    def to_grid(self) -> Grid1D:
        if self.is_radial:
            return Grid1D.from_spacing(
                self.x_min if self.x_min is not None else _RADIAL.r_min,
                self.x_max if self.x_max is not None else _RADIAL.r_max,
                self.h or _RADIAL.h,
                radial=True,
            )
        return Grid1D.from_spacing(
            self.x_min if self.x_min is not None else _VNW.x_min,
            self.x_max if self.x_max is not None else _VNW.x_max,
            self.h or _VNW.h,
        )

    def resolved_window(self) -> tuple[float, float]:
        if self.window is not None:
            return self.window
        return _RADIAL.window if self.is_radial else _VNW.window


class ScanInput(BaseRunInput):
    """Input for ``scan``: a sweep of theorem audits.

    Examples:
        >>> ScanInput(points=[SweepPoint(mass=0.5), SweepPoint(mass=2.0)])
        >>> ScanInput.from_grid(masses=[0.5, 1, 2], interactions=["vnw"])
    """

    points: list[SweepPoint] = Field(description="Sweep points, audited in index order.")

    @field_validator("points")
    @classmethod
    def validate_points(cls, v: list[SweepPoint]) -> list[SweepPoint]:
        """Reject an empty sweep."""
        if not v:
            raise ValueError(
                "The sweep is empty. Pass at least one --mass/--charge/--h value "
                "or a sweep file with a non-empty 'points' list."
            )
        return v

    @classmethod
    def from_grid(
        cls,
        masses: list[float],
        interactions: list[str],
        charges: Optional[list[float]] = None,
        spacings: Optional[list[float]] = None,
        windows: Optional[list[str]] = None,
        formula: str = "derived",
        **kwargs,
    ) -> "ScanInput":
        """Cartesian product of repeated flag values, in flag order."""
        points = [
            SweepPoint(
                interaction=interaction,
                mass=mass,
                charge=charge if charge is not None else _RADIAL.charge,
                h=h,
                window=window,
                formula=formula,
            )
            for interaction, mass, charge, h, window in itertools.product(
                interactions, masses, charges or [None], spacings or [None], windows or [None]
            )
        ]
        return cls(points=points, **kwargs)

    @classmethod
    def from_yaml(cls, path: Path, **kwargs) -> "ScanInput":
        """Load a sweep file.

        The file holds a ``points`` list of mappings and an optional
        ``defaults`` mapping merged under every point.

        Raises:
            FileNotFoundError: If the sweep file is missing.
            ValueError: If the file is not a mapping with a ``points`` list.
        """
        if not path.exists():
            raise FileNotFoundError(f"Sweep file not found at {path}")
        raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        if not isinstance(raw, dict) or not isinstance(raw.get("points", []), list):
            raise ValueError(f"Sweep file {path} must be a mapping with a 'points' list")
        defaults = raw.get("defaults") or {}
        if not isinstance(defaults, dict):
            raise ValueError(f"'defaults' in {path} must be a mapping")
        points = [SweepPoint(**{**defaults, **(point or {})}) for point in raw.get("points", [])]
        return cls(points=points, **kwargs)
