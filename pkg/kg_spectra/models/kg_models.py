"""Pydantic models for Klein-Gordon parameters and seminorm queries."""

from __future__ import annotations

from enum import Enum
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from kg_spectra.constants import COULOMB_DIMENSION, SQRT_17
from kg_spectra.models.potential_models import PotentialKind, PotentialSpec


class Branch(str, Enum):
    """Sign of the Klein-Gordon energy E = +-sqrt(E~ + m^2)."""

    POSITIVE = "positive"
    NEGATIVE = "negative"

    @property
    def sign(self) -> float:
        return 1.0 if self is Branch.POSITIVE else -1.0


class PureScalar(BaseModel):
    """Scalar interaction q_s entering as (-Delta + q_s + m^2) psi = E^2 psi."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["scalar"] = "scalar"
    potential: PotentialSpec


class PureElectric(BaseModel):
    """Electric interaction b0 entering through V_eff = -(b0)^2 + 2 E b0."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["electric"] = "electric"
    potential: PotentialSpec


Interaction = Annotated[Union[PureScalar, PureElectric], Field(discriminator="kind")]


def coulomb_charge_bound(dimension: int = COULOMB_DIMENSION) -> float:
    """Upper bound |e| < (n - 2) / (2 sqrt 17) on the Coulomb charge."""
    return (dimension - 2) / (2.0 * SQRT_17)


class KGParams(BaseModel):
    """Klein-Gordon problem: mass, interaction and space dimension.

    Examples:
        >>> KGParams(mass=1.0, interaction=PureScalar(potential=PotentialSpec.vnw_derived()))
        >>> KGParams(mass=1.0, dimension=3,
        ...          interaction=PureElectric(potential=PotentialSpec.coulomb(-0.1)))
    """

    model_config = ConfigDict(frozen=True)

    mass: float = Field(gt=0, description="Particle mass m in natural units.")
    interaction: Interaction
    dimension: Literal[1, 3] = Field(1, description="1 for the line, 3 for the radial reduction.")

    @model_validator(mode="after")
    def validate_interaction(self) -> "KGParams":
        """Check interaction/dimension compatibility and the Coulomb charge bound."""
        potential = self.interaction.potential
        if isinstance(self.interaction, PureScalar):
            if self.dimension != 1 or potential.is_radial:
                raise ValueError(
                    "Scalar interactions are solved on the line only (dimension=1, full_line domain)."
                )
            return self

        if potential.kind is not PotentialKind.COULOMB_3D:
            raise ValueError(
                f"Electric interactions must be Coulomb potentials, got '{potential.kind.value}'."
            )
        if self.dimension != COULOMB_DIMENSION:
            raise ValueError("Coulomb electric interactions use the radial reduction, dimension=3.")
        bound = coulomb_charge_bound(self.dimension)
        if abs(potential.charge) >= bound:
            raise ValueError(
                f"Coulomb charge |e| = {abs(potential.charge)} violates |e| < (n-2)/(2 sqrt 17) "
                f"= {bound:.6f} for n = {self.dimension}."
            )
        return self

    @property
    def potential(self) -> PotentialSpec:
        return self.interaction.potential

    @property
    def is_scalar(self) -> bool:
        return isinstance(self.interaction, PureScalar)

    def as_payload(self) -> dict:
        return {
            "mass": self.mass,
            "dimension": self.dimension,
            "interaction": self.interaction.kind,
            "potential": self.potential.as_payload(),
        }


class SeminormQuery(BaseModel):
    """One evaluation of N_{alpha,delta}(g) for g derived from a potential.

    ``transform`` selects g: ``identity`` is q, ``abs_sqrt`` is |q|^(1/2),
    ``negative_part`` is q^- and ``square`` is q^2.
    """

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0)
    delta: float = Field(gt=0)
    dimension: int = Field(1, ge=1)
    target: PotentialSpec
    transform: Literal["identity", "abs_sqrt", "negative_part", "square"] = "identity"
