"""Configuration loading and numeric defaults."""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from kg_spectra.constants import CONFIG_ENV_VAR, CONFIG_PATH, OUTPUT_DIR_ENV_VAR

logger = logging.getLogger(__name__)


def _ordered_pair(value: tuple[float, float], label: str) -> tuple[float, float]:
    low, high = value
    if not low < high:
        raise ValueError(f"{label} must be an increasing pair [low, high], got [{low}, {high}]")
    return value


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class VnwDefaults(_Section):
    """Defaults for the one-dimensional scalar (von Neumann-Wigner) runs."""

    mass: float = Field(1.0, gt=0)
    eigenvalue: float = 1.0
    x_min: float = -80.0
    x_max: float = 80.0
    h: float = Field(0.005, gt=0)
    window: tuple[float, float] = (0.5, 1.5)
    tolerance: float = Field(1e-3, gt=0)
    formula: Literal["derived", "printed"] = "derived"

    @field_validator("window")
    @classmethod
    def validate_window(cls, v: tuple[float, float]) -> tuple[float, float]:
        return _ordered_pair(v, "vnw.window")


class RadialDefaults(_Section):
    """Defaults for the three-dimensional radial Coulomb runs."""

    charge: float = -0.1
    ell: int = Field(0, ge=0)
    r_min: float = Field(1e-3, gt=0)
    r_max: float = Field(200.0, gt=0)
    h: float = Field(0.0025, gt=0)
    window: tuple[float, float] = (0.0, 20.0)
    r0: float = Field(1.0, gt=0)
    energy_slices: int = Field(4, ge=1)
    far_field_tolerance: float = Field(1e-3, gt=0)

    @field_validator("window")
    @classmethod
    def validate_window(cls, v: tuple[float, float]) -> tuple[float, float]:
        return _ordered_pair(v, "radial.window")


class LocalizationDefaults(_Section):
    """Thresholds of the localized/scattering classifier."""

    mass_fraction: float = Field(0.99, gt=0, le=1)
    eigenvalue_match: float = Field(1e-4, gt=0)


class QuadratureDefaults(_Section):
    """Adaptive quadrature and supremum-scan settings."""

    tolerance: float = Field(1e-9, gt=0)
    max_intervals: int = Field(1_000_000, ge=1)
    order: int = Field(10, ge=2)
    scan_window: tuple[float, float] = (-200.0, 200.0)
    scan_spacing: float = Field(0.125, gt=0)

    @field_validator("scan_window")
    @classmethod
    def validate_scan_window(cls, v: tuple[float, float]) -> tuple[float, float]:
        return _ordered_pair(v, "quadrature.scan_window")


class ConditionDefaults(_Section):
    """Parameters of the condition-I lambda scan and seminorm trends."""

    lambda_points: int = Field(64, ge=1)
    lambda_refinements: int = Field(12, ge=0)
    lambda_min: float = Field(1e-4, gt=0)
    delta_trend: tuple[float, ...] = (1.0, 0.5, 0.25, 0.125)


class FixedPointDefaults(_Section):
    """Damped self-consistency loop for energy-dependent potentials."""

    damping: float = Field(0.5, gt=0, le=1)
    tolerance: float = Field(1e-10, gt=0)
    max_iterations: int = Field(200, ge=1)


class SolverDefaults(_Section):
    """Eigen-solver parallelism and reproducibility."""

    workers: int = Field(1, ge=1)
    chunk_size: int = Field(64, ge=1)
    seed: int = 0


class Settings(_Section):
    """Validated content of ``settings.yaml``."""

    output_dir: Path = Path("results")
    log_level: str = "INFO"
    vnw: VnwDefaults = VnwDefaults()
    radial: RadialDefaults = RadialDefaults()
    localization: LocalizationDefaults = LocalizationDefaults()
    quadrature: QuadratureDefaults = QuadratureDefaults()
    conditions: ConditionDefaults = ConditionDefaults()
    fixed_point: FixedPointDefaults = FixedPointDefaults()
    solver: SolverDefaults = SolverDefaults()

    def as_payload(self) -> dict:
        """Return a JSON-ready view of every default."""
        return self.model_dump(mode="json")


def resolve_config_path() -> Path:
    """Return the settings path, honouring the ``KG_SPECTRA_CONFIG`` override."""
    override = os.environ.get(CONFIG_ENV_VAR)
    return Path(override).expanduser() if override else CONFIG_PATH


def resolve_output_dir(settings: Settings) -> Path:
    """Return the default output directory, honouring ``KG_SPECTRA_OUTPUT_DIR``."""
    override = os.environ.get(OUTPUT_DIR_ENV_VAR)
    return Path(override).expanduser() if override else settings.output_dir


def load_settings(config_path: Path | None = None) -> Settings:
    """Load and validate the settings file.

    Args:
        config_path: Path to the YAML settings file. Defaults to ``settings.yaml``
            at the repository root, or the path named by ``KG_SPECTRA_CONFIG``.

    Returns:
        A fully populated :class:`Settings`. Sections missing from the file keep
        their built-in defaults.

    Raises:
        FileNotFoundError: If the settings file is missing.
        ValueError: If the file does not parse to a mapping or a section holds
            invalid values.
    """
    path = config_path or resolve_config_path()
    if not path.exists():
        raise FileNotFoundError(f"Settings file not found at {path}")

    raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    if not isinstance(raw, dict):
        raise ValueError(f"Settings file {path} must contain a mapping of sections")

    try:
        settings = Settings.model_validate(raw)
    except ValidationError as exc:
        sections = sorted({str(err["loc"][0]) for err in exc.errors() if err["loc"]})
        raise ValueError(
            f"Settings file {path} has invalid values in section(s) {', '.join(sections)}: {exc}"
        ) from exc

    logger.debug("Loaded settings from %s", path)
    return settings


# Module-level singleton - loaded once at import time
SETTINGS = load_settings()
