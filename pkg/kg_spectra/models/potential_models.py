"""Pydantic model describing a potential on the line or the radial half-line.

A :class:`PotentialSpec` is a tagged, immutable description: the ``kind``
selects the closed form, the remaining fields carry the kind-specific
parameters, and ``domain`` says whether the potential lives on the full line
or on the radial half-line with a given angular momentum.
"""

from __future__ import annotations

from enum import Enum
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator


class PotentialKind(str, Enum):
    """Closed forms understood by the potential evaluators."""

    VNW_PRINTED = "vnw_printed"
    VNW_DERIVED = "vnw_derived"
    COULOMB_3D = "coulomb_3d"
    SQUARE_WELL = "square_well"
    ZERO = "zero"
    CUSTOM_SAMPLES = "custom_samples"


class FullLine(BaseModel):
    """The whole real line."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["full_line"] = "full_line"


class HalfLineRadial(BaseModel):
    """The radial half-line r > 0 of a central problem in three dimensions."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["half_line_radial"] = "half_line_radial"
    ell: int = Field(0, ge=0, description="Angular momentum quantum number.")


Domain = Annotated[Union[FullLine, HalfLineRadial], Field(discriminator="kind")]


class PotentialSpec(BaseModel):
    """Tagged description of a potential.

    Examples:
        >>> PotentialSpec.vnw_derived()
        >>> PotentialSpec.square_well(depth=5.0, half_width=1.0)
        >>> PotentialSpec.coulomb(charge=-0.1, ell=0)
    """

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "examples": [
                {"kind": "vnw_derived", "eigenvalue": 1.0},
                {"kind": "square_well", "depth": 5.0, "half_width": 1.0},
                {"kind": "coulomb_3d", "charge": -0.1, "domain": {"kind": "half_line_radial", "ell": 0}},
            ]
        },
    )

    kind: PotentialKind
    charge: Optional[float] = Field(
        None, description="Coulomb charge e (dimensionless, hbar = c = 1). Coulomb only."
    )
    depth: Optional[float] = Field(None, description="Square-well depth V0 > 0.")
    half_width: Optional[float] = Field(None, description="Square-well half-width a > 0.")
    eigenvalue: float = Field(
        1.0, description="Schrodinger eigenvalue E0 the derived vNW potential is built for."
    )
    samples_x: Optional[tuple[float, ...]] = Field(
        None, description="Strictly increasing abscissae of a sampled potential."
    )
    samples_v: Optional[tuple[float, ...]] = Field(
        None, description="Potential values at ``samples_x`` (linear interpolation, clamped)."
    )
    domain: Domain = Field(default_factory=FullLine)

    @model_validator(mode="after")
    def validate_kind_parameters(self) -> "PotentialSpec":
        """Check that each kind carries its parameters and a compatible domain."""
        kind = self.kind
        if kind is PotentialKind.COULOMB_3D:
            if self.charge is None:
                raise ValueError("Coulomb potentials need a 'charge' value, e.g. charge=-0.1.")
            if not isinstance(self.domain, HalfLineRadial):
                raise ValueError(
                    "Coulomb potentials live on the radial half-line. "
                    "Use PotentialSpec.coulomb(charge, ell) or a half_line_radial domain."
                )
        if kind is PotentialKind.SQUARE_WELL:
            if self.depth is None or self.depth <= 0:
                raise ValueError(f"Square-well depth must be > 0, got {self.depth}.")
            if self.half_width is None or self.half_width <= 0:
                raise ValueError(f"Square-well half-width must be > 0, got {self.half_width}.")
        if kind is PotentialKind.CUSTOM_SAMPLES:
            if not self.samples_x or self.samples_v is None:
                raise ValueError("Sampled potentials need both 'samples_x' and 'samples_v'.")
            if len(self.samples_x) != len(self.samples_v):
                raise ValueError(
                    f"samples_x has {len(self.samples_x)} entries but samples_v has "
                    f"{len(self.samples_v)}; provide one value per abscissa."
                )
            if len(self.samples_x) < 2:
                raise ValueError("Sampled potentials need at least two rows.")
            if any(b <= a for a, b in zip(self.samples_x, self.samples_x[1:])):
                raise ValueError("samples_x must be strictly increasing.")
        return self

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls) -> "PotentialSpec":
        return cls(kind=PotentialKind.ZERO)

    @classmethod
    def square_well(cls, depth: float, half_width: float) -> "PotentialSpec":
        return cls(kind=PotentialKind.SQUARE_WELL, depth=depth, half_width=half_width)

    @classmethod
    def vnw_derived(cls, eigenvalue: float = 1.0) -> "PotentialSpec":
        return cls(kind=PotentialKind.VNW_DERIVED, eigenvalue=eigenvalue)

    @classmethod
    def vnw_printed(cls) -> "PotentialSpec":
        return cls(kind=PotentialKind.VNW_PRINTED)

    @classmethod
    def coulomb(cls, charge: float, ell: int = 0) -> "PotentialSpec":
        return cls(kind=PotentialKind.COULOMB_3D, charge=charge, domain=HalfLineRadial(ell=ell))

    @classmethod
    def custom(cls, xs, vs) -> "PotentialSpec":
        return cls(
            kind=PotentialKind.CUSTOM_SAMPLES,
            samples_x=tuple(float(x) for x in xs),
            samples_v=tuple(float(v) for v in vs),
        )

    def radial(self, ell: int = 0) -> "PotentialSpec":
        """Return a copy explicitly wrapped for radial use with angular momentum ``ell``."""
        return self.model_copy(update={"domain": HalfLineRadial(ell=ell)})

    # ------------------------------------------------------------------
    # Derived properties
    # ------------------------------------------------------------------

    @property
    def is_radial(self) -> bool:
        return isinstance(self.domain, HalfLineRadial)

    @property
    def ell(self) -> int:
        return self.domain.ell if isinstance(self.domain, HalfLineRadial) else 0

    @property
    def energy_dependent(self) -> bool:
        return self.kind is PotentialKind.COULOMB_3D

    @property
    def is_vnw(self) -> bool:
        return self.kind in (PotentialKind.VNW_DERIVED, PotentialKind.VNW_PRINTED)

    def breakpoints(self) -> tuple[float, ...]:
        """Abscissae where the potential is not smooth."""
        if self.kind is PotentialKind.SQUARE_WELL:
            return (-self.half_width, self.half_width)
        if self.kind is PotentialKind.CUSTOM_SAMPLES:
            return tuple(self.samples_x)
        return ()

    def as_payload(self) -> dict:
        """Return a compact JSON-ready description (unset parameters omitted)."""
        payload = self.model_dump(mode="json", exclude_none=True)
        if self.kind is not PotentialKind.VNW_DERIVED:
            payload.pop("eigenvalue", None)
        return payload
