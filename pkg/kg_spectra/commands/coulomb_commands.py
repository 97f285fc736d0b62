"""``coulomb``: bound states and the empty continuum ray of the pure electric Coulomb problem.

Delegates to kg_spectra.core.kg_operations and condition_operations.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import numpy as np
import typer

from kg_spectra.app import app
from kg_spectra.commands.common import CommandOutcome, acceptance_code, finish, guarded, report_path
from kg_spectra.config import SETTINGS
from kg_spectra.core.condition_operations import check_coulomb_parameters
from kg_spectra.core.kg_operations import (
    absence_region,
    continuum_kg_energies,
    electric_continuum_scan,
    electric_kg_fixed_point,
)
from kg_spectra.core.potential_operations import evaluate
from kg_spectra.core.report_operations import build_provenance, write_csv, write_json_report
from kg_spectra.errors import NoEigenvalueError
from kg_spectra.models import CoulombInput

_RADIAL = SETTINGS.radial


def run_coulomb(config: CoulombInput) -> CommandOutcome:
    """Fixed-point bound state, continuum scan on the forbidden branch and Simon checks.

    Exit 0 iff every bound state satisfies |E| < m and the forbidden ray holds
    no Localized state.
    """
    params = config.to_params()
    grid = config.to_grid()
    spec = params.potential
    conditions = check_coulomb_parameters(config.charge, params.dimension)
    region = absence_region(params, grid, config.r0, config.far_field_tolerance)

    bound = None
    bound_note = None
    if config.bound_branch is None:
        bound_note = "e = 0: no attractive branch"
    else:
        try:
            bound = electric_kg_fixed_point(
                params, grid, config.bound_branch, tolerance=config.tolerance
            )
        except NoEigenvalueError as exc:
            bound_note = str(exc)

    entries = electric_continuum_scan(
        params,
        grid,
        config.window,
        config.forbidden_branch,
        config.energy_slices,
        workers=config.workers,
        seed=config.seed,
    )
    embedded = continuum_kg_energies(entries, config.mass, config.forbidden_branch)
    bound_ok = bound is None or (bound.converged and abs(bound.energy) < config.mass)
    ok = bound_ok and not embedded

    payload = {
        "command": "coulomb",
        "params": config.model_dump(mode="json"),
        "conditions": [report.as_payload() for report in conditions],
        "bound_state": bound.as_payload() if bound is not None else None,
        "bound_state_note": bound_note,
        "continuum": {
            "branch": config.forbidden_branch.value,
            "window": list(config.window),
            "slices": config.energy_slices,
            "count": len(entries),
            "localized": [result.as_payload() for result in embedded],
        },
        "absence": region.as_payload(),
        "acceptance": {"ok": ok, "bound_state_ok": bound_ok, "embedded_count": len(embedded)},
        "provenance": build_provenance(grid, spec.kind.value, None, config.seed, command="coulomb"),
    }

    path = report_path(config.out, "coulomb", ".json" if config.output_format == "json" else ".csv")
    if config.output_format == "json":
        written = write_json_report(payload, path)
    else:
        energy = bound.energy if bound is not None else config.forbidden_branch.sign * config.mass
        r = grid.interior
        written = write_csv({"r": r, "V_eff": np.asarray(evaluate(spec, r, energy))}, path)

    if bound is not None:
        state = f"bound E = {bound.energy:.10g} ({'converged' if bound.converged else 'NOT converged'})"
    else:
        state = "no bound state"
    summary = (
        f"coulomb: {state}; {len(embedded)} localized state(s) on the "
        f"{config.forbidden_branch.value} continuum ray; acceptance {'ok' if ok else 'MISSED'}"
    )
    return CommandOutcome(
        exit_code=acceptance_code(ok), payload=payload, paths=(written,), messages=(summary,)
    )


@app.command("coulomb")
def coulomb(
    mass: float = typer.Option(1.0, "--mass", help="Particle mass m."),
    charge: float = typer.Option(_RADIAL.charge, "--charge", help="Coulomb charge e, |e| < 1/(2 sqrt 17)."),
    ell: int = typer.Option(_RADIAL.ell, "--ell", help="Angular momentum l."),
    r_min: float = typer.Option(_RADIAL.r_min, "--xmin", help="Inner radius r_min."),
    r_max: float = typer.Option(_RADIAL.r_max, "--xmax", help="Outer radius r_max."),
    h: float = typer.Option(_RADIAL.h, "--h", help="Radial grid spacing."),
    window: str = typer.Option(
        f"{_RADIAL.window[0]:g},{_RADIAL.window[1]:g}", "--window", help="Continuum window 'lo,hi' in E~."
    ),
    r0: float = typer.Option(_RADIAL.r0, "--r0", help="Radius R0 of the Simon checks."),
    tolerance: float = typer.Option(
        SETTINGS.fixed_point.tolerance, "--tol", help="Fixed-point stopping tolerance."
    ),
    far_field_tolerance: float = typer.Option(
        _RADIAL.far_field_tolerance, "--far-field-tol", help="Bound on |V1| over the outer decade."
    ),
    energy_slices: int = typer.Option(
        _RADIAL.energy_slices, "--slices", help="Frozen-energy slices of the continuum window."
    ),
    out: Optional[Path] = typer.Option(None, "--out", help="Report path."),
    output_format: str = typer.Option("json", "--format", help="'json' report or 'csv' of V_eff."),
    workers: int = typer.Option(SETTINGS.solver.workers, "--workers", help="Solver threads."),
    seed: int = typer.Option(SETTINGS.solver.seed, "--seed", help="Inverse-iteration seed."),
) -> None:
    """Check the Coulomb absence statement: bound states below m, nothing embedded on the forbidden ray."""
    finish(
        guarded(
            "coulomb",
            lambda: run_coulomb(
                CoulombInput(
                    mass=mass,
                    charge=charge,
                    ell=ell,
                    r_min=r_min,
                    r_max=r_max,
                    h=h,
                    window=window,
                    r0=r0,
                    tolerance=tolerance,
                    far_field_tolerance=far_field_tolerance,
                    energy_slices=energy_slices,
                    out=out,
                    output_format=output_format,
                    workers=workers,
                    seed=seed,
                )
            ),
        )
    )
