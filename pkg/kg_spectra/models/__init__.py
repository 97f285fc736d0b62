"""Pydantic models for potentials, grids, Klein-Gordon parameters and run inputs.

Architecture:
- potential_models: PotentialSpec and its domains
- grid_models: Grid1D
- kg_models: KGParams, interactions, Branch, SeminormQuery
- base: BaseRunInput shared by every subcommand
- run_models: one input model per subcommand plus sweep points

Usage:
    from kg_spectra.models import PotentialSpec, Grid1D, KGParams
"""

from .potential_models import Domain, FullLine, HalfLineRadial, PotentialKind, PotentialSpec
from .grid_models import Grid1D
from .kg_models import (
    Branch,
    KGParams,
    PureElectric,
    PureScalar,
    SeminormQuery,
    coulomb_charge_bound,
)
from .base import BaseRunInput, parse_window
from .run_models import (
    CheckConditionsInput,
    CoulombInput,
    ScanInput,
    SweepPoint,
    VerifyVnwInput,
)

__all__ = [
    "Domain",
    "FullLine",
    "HalfLineRadial",
    "PotentialKind",
    "PotentialSpec",
    "Grid1D",
    "Branch",
    "KGParams",
    "PureElectric",
    "PureScalar",
    "SeminormQuery",
    "coulomb_charge_bound",
    "BaseRunInput",
    "parse_window",
    "CheckConditionsInput",
    "CoulombInput",
    "ScanInput",
    "SweepPoint",
    "VerifyVnwInput",
]
