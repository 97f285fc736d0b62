"""Klein-Gordon spectral toolkit

Embedded eigenvalues, operator hypotheses and absence regions for
Klein-Gordon operators with scalar and Coulomb interactions.
"""

__version__ = "0.1.0"

from kg_spectra.config import SETTINGS
from kg_spectra.data_models import AbsenceRegion, ConditionReport, KGEigenResult, ScanEntry, Verdict
from kg_spectra.models import Grid1D, KGParams, PotentialSpec
from kg_spectra.app import app, run

# Import commands to register them with the Typer app
from kg_spectra import commands  # noqa: F401,E402

__all__ = [
    "SETTINGS",
    "AbsenceRegion",
    "ConditionReport",
    "KGEigenResult",
    "ScanEntry",
    "Verdict",
    "Grid1D",
    "KGParams",
    "PotentialSpec",
    "app",
    "run",
]
