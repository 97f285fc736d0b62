"""``check-conditions``: condition I and the seminorm memberships of a scalar potential.

Delegates to kg_spectra.core.condition_operations.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import numpy as np
import typer

from kg_spectra.app import app
from kg_spectra.commands.common import CommandOutcome, acceptance_code, finish, guarded, report_path
from kg_spectra.config import SETTINGS
from kg_spectra.core.condition_operations import (
    check_condition_I,
    check_seminorm_conditions,
    default_lambda_grid,
)
from kg_spectra.core.report_operations import build_provenance, write_csv, write_json_report
from kg_spectra.data_models import Verdict
from kg_spectra.models import CheckConditionsInput

_COND = SETTINGS.conditions
_QUAD = SETTINGS.quadrature


def run_check_conditions(config: CheckConditionsInput) -> CommandOutcome:
    """Evaluate every condition and write the report; exit 1 on any Fails verdict."""
    spec = config.to_spec()
    lambdas = default_lambda_grid(config.mass, config.lambda_points, config.lambda_min)
    condition_i = check_condition_I(
        spec,
        config.mass,
        lambdas,
        scan_window=config.scan_window,
        quadrature_tol=config.tolerance,
        workers=config.workers,
    )
    reports = [condition_i] + check_seminorm_conditions(
        spec, scan_window=config.scan_window, quadrature_tol=config.tolerance
    )
    failed = [report.condition_id for report in reports if report.verdict is Verdict.FAILS]

    payload = {
        "command": "check-conditions",
        "params": config.model_dump(mode="json"),
        "conditions": [report.as_payload() for report in reports],
        "failed": failed,
        "provenance": build_provenance(
            None,
            spec.kind.value,
            "printed" if config.potential == "vnw_printed" else "derived",
            config.seed,
            command="check-conditions",
            lambda_grid=lambdas,
        ),
    }

    path = report_path(config.out, "check_conditions", ".json" if config.output_format == "json" else ".csv")
    if config.output_format == "json":
        written = write_json_report(payload, path)
    else:
        table = np.asarray(condition_i.witness["scan"], dtype=float)
        written = write_csv(
            {"lambda": table[:, 0], "s_lambda": table[:, 1], "upper_bound": table[:, 2]}, path
        )

    summary = "check-conditions: " + ", ".join(
        f"{report.condition_id}={report.verdict.value}" for report in reports
    )
    return CommandOutcome(
        exit_code=acceptance_code(not failed),
        payload=payload,
        paths=(written,),
        messages=(summary,),
    )


@app.command("check-conditions")
def check_conditions(
    potential: str = typer.Option(
        "vnw_derived", "--potential", help="vnw_derived, vnw_printed, square_well or zero."
    ),
    mass: float = typer.Option(1.0, "--mass", help="Particle mass m."),
    eigenvalue: float = typer.Option(1.0, "--eigenvalue", help="E0 of the derived vNW potential."),
    depth: float = typer.Option(5.0, "--depth", help="Square-well depth V0."),
    half_width: float = typer.Option(1.0, "--half-width", help="Square-well half-width a."),
    tolerance: float = typer.Option(_QUAD.tolerance, "--tol", help="Quadrature tolerance."),
    lambda_points: int = typer.Option(_COND.lambda_points, "--lambda-points", help="Lambda grid size."),
    lambda_min: float = typer.Option(_COND.lambda_min, "--lambda-min", help="Smallest lambda."),
    scan_window: str = typer.Option(
        f"{_QUAD.scan_window[0]:g},{_QUAD.scan_window[1]:g}",
        "--window",
        help="Scan window 'lo,hi' for the suprema.",
    ),
    out: Optional[Path] = typer.Option(None, "--out", help="Report path."),
    output_format: str = typer.Option("json", "--format", help="'json' report or 'csv' lambda table."),
    workers: int = typer.Option(SETTINGS.solver.workers, "--workers", help="Threads over the lambda grid."),
    seed: int = typer.Option(SETTINGS.solver.seed, "--seed", help="Recorded in the provenance."),
) -> None:
    """Check condition I (S_lambda(q^-) <= 1 for some lambda < m^2) and II'-VI'.

    Exit 0 iff no condition Fails.
    """
    finish(
        guarded(
            "check-conditions",
            lambda: run_check_conditions(
                CheckConditionsInput(
                    potential=potential,
                    mass=mass,
                    eigenvalue=eigenvalue,
                    depth=depth,
                    half_width=half_width,
                    tolerance=tolerance,
                    lambda_points=lambda_points,
                    lambda_min=lambda_min,
                    scan_window=scan_window,
                    out=out,
                    output_format=output_format,
                    workers=workers,
                    seed=seed,
                )
            ),
        )
    )
