"""Base Pydantic model shared by every command input.

Each subcommand validates its flags into one input model before any numerics
run, so a bad flag fails fast with a message naming the flag.
"""

from __future__ import annotations

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


def parse_window(value: object) -> tuple[float, float]:
    """Accept ``"lo,hi"`` strings as well as two-element sequences.

    Raises:
        ValueError: If the value does not describe an increasing pair.
    """
    if isinstance(value, str):
        parts = [part.strip() for part in value.strip("[]() ").split(",")]
        if len(parts) != 2:
            raise ValueError(f"Window must look like 'lo,hi', got '{value}'")
        try:
            low, high = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise ValueError(f"Window bounds must be numbers, got '{value}'") from exc
    else:
        try:
            low, high = (float(item) for item in value)  # type: ignore[union-attr]
        except (TypeError, ValueError) as exc:
            raise ValueError(f"Window must be a pair [lo, hi], got {value!r}") from exc
    if not low < high:
        raise ValueError(f"Window must satisfy lo < hi, got lo={low}, hi={high}")
    return low, high


class BaseRunInput(BaseModel):
    """Parameters common to every subcommand.

    Examples:
        >>> BaseRunInput(mass=1.0, seed=0)
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    mass: float = Field(
        1.0,
        gt=0,
        description="Particle mass m in natural units (hbar = c = 1).",
        examples=[1.0, 0.5, 2.0],
    )
    out: Optional[Path] = Field(
        None,
        description=(
            "Output file for the report. Omit to write into the configured output directory "
            "(KG_SPECTRA_OUTPUT_DIR overrides settings.yaml)."
        ),
    )
    output_format: Literal["json", "csv"] = Field(
        "json", description="Report format: 'json' document or 'csv' of gridded functions."
    )
    seed: int = Field(0, ge=0, description="Seed for inverse-iteration random restarts.")
    workers: int = Field(1, ge=1, description="Worker budget for window splitting and sweeps.")

    @field_validator("out")
    @classmethod
    def validate_out(cls, v: Optional[Path]) -> Optional[Path]:
        """Reject directories passed as output files."""
        if v is not None and v.exists() and v.is_dir():
            raise ValueError(
                f"--out must name a file, but '{v}' is a directory. "
                "Example: --out results/vnw.json"
            )
        return v
