"""Uniform grids on truncated intervals."""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Grid1D(BaseModel):
    """Uniform discretization of [x_min, x_max] with Dirichlet ends.

    Both end nodes carry the boundary condition psi = 0; operators act on the
    ``n_points - 2`` interior nodes.

    Examples:
        >>> Grid1D(x_min=-80.0, x_max=80.0, n_points=32001)
        >>> Grid1D.from_spacing(1e-3, 200.0, 0.0025, radial=True)
    """

    model_config = ConfigDict(frozen=True)

    x_min: float
    x_max: float
    n_points: int = Field(ge=3, description="Number of nodes including both boundary nodes.")
    radial: bool = Field(False, description="True for the radial half-line r > 0.")
    boundary: Literal["dirichlet"] = "dirichlet"

    @model_validator(mode="after")
    def validate_bounds(self) -> "Grid1D":
        """Enforce x_min < x_max and a strictly positive radial origin."""
        if not self.x_min < self.x_max:
            raise ValueError(
                f"Grid needs x_min < x_max, got x_min={self.x_min}, x_max={self.x_max}."
            )
        if self.radial and self.x_min <= 0:
            raise ValueError(
                f"Radial grids must start at r_min > 0 (got {self.x_min}); "
                "the Dirichlet node at r_min stands in for the regular solution at the origin."
            )
        return self

    @classmethod
    def from_spacing(cls, x_min: float, x_max: float, h: float, radial: bool = False) -> "Grid1D":
        """Build the grid whose spacing is closest to ``h`` on [x_min, x_max]."""
        if h <= 0:
            raise ValueError(f"Grid spacing must be > 0, got {h}.")
        n_points = int(round((x_max - x_min) / h)) + 1
        return cls(x_min=x_min, x_max=x_max, n_points=max(n_points, 3), radial=radial)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def spacing(self) -> float:
        return self.length / (self.n_points - 1)

    @property
    def center(self) -> float:
        return 0.5 * (self.x_min + self.x_max)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def interior(self) -> np.ndarray:
        return self.points[1:-1]

    def doubled(self) -> "Grid1D":
        """Grid covering twice the length at the same spacing.

        Full-line grids grow symmetrically about their center; radial grids keep
        r_min and extend outwards.
        """
        n_points = 2 * (self.n_points - 1) + 1
        if self.radial:
            return Grid1D(
                x_min=self.x_min, x_max=self.x_min + 2.0 * self.length, n_points=n_points, radial=True
            )
        return Grid1D(
            x_min=self.center - self.length,
            x_max=self.center + self.length,
            n_points=n_points,
            radial=False,
        )

    def inner_bounds(self) -> tuple[float, float]:
        """Interval holding the "inner half" used for localization mass fractions."""
        if self.radial:
            return self.x_min, self.x_min + 0.5 * self.length
        quarter = 0.25 * self.length
        return self.center - quarter, self.center + quarter

    def as_payload(self) -> dict:
        return {
            "x_min": self.x_min,
            "x_max": self.x_max,
            "n_points": self.n_points,
            "h": self.spacing,
            "radial": self.radial,
            "boundary": self.boundary,
        }
