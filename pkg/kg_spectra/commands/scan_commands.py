"""``scan``: theorem audits over a parameter sweep, written as JSON lines.

Points come from repeated flags (their Cartesian product) or from a YAML
sweep file. Points run concurrently in worker processes; records are written
in sweep order whatever the completion order.

Delegates to kg_spectra.core.kg_operations.theorem_audit.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Optional

import typer

from kg_spectra.app import app
from kg_spectra.commands.common import CommandOutcome, finish, guarded, report_path
from kg_spectra.config import SETTINGS
from kg_spectra.constants import EXIT_ACCEPTANCE_MISS, EXIT_FAILURE, EXIT_OK
from kg_spectra.core.kg_operations import theorem_audit
from kg_spectra.core.report_operations import to_jsonable, write_csv, write_json_lines
from kg_spectra.errors import AuditStageError
from kg_spectra.models import ScanInput, SweepPoint

logger = logging.getLogger(__name__)


def audit_point(index: int, point: SweepPoint, seed: int) -> dict[str, Any]:
    """Audit one sweep point; failures become records instead of exceptions."""
    record: dict[str, Any] = {"index": index, "point": point.model_dump(mode="json")}
    try:
        report = theorem_audit(
            point.to_params(), point.to_grid(), point.resolved_window(), workers=1, seed=seed
        )
    except AuditStageError as exc:
        logger.error("Sweep point %d failed in stage %s: %s", index, exc.stage, exc)
        record.update(
            status="failed",
            error={"stage": exc.stage, "type": type(exc.__cause__).__name__, "message": str(exc)},
        )
        return to_jsonable(record)
    except Exception as exc:  # noqa: BLE001 - recorded per point
        logger.error("Sweep point %d failed: %s", index, exc)
        record.update(
            status="failed", error={"stage": "setup", "type": type(exc).__name__, "message": str(exc)}
        )
        return to_jsonable(record)
    record.update(status="ok", consistent=report.consistent, audit=report.as_payload())
    return to_jsonable(record)


def _summary_columns(records: list[dict[str, Any]]) -> dict[str, list[float]]:
    columns: dict[str, list[float]] = {
        "index": [],
        "mass": [],
        "charge": [],
        "h": [],
        "forbidden_above": [],
        "localized": [],
        "consistent": [],
    }
    for record in records:
        point = record["point"]
        audit = record.get("audit") or {}
        absence = audit.get("absence") or {}
        above = absence.get("forbidden_above")
        columns["index"].append(record["index"])
        columns["mass"].append(point["mass"])
        columns["charge"].append(point["charge"] if point["interaction"] == "coulomb" else math.nan)
        columns["h"].append(point["h"] if point["h"] is not None else math.nan)
        columns["forbidden_above"].append(above if isinstance(above, (int, float)) else math.nan)
        columns["localized"].append((audit.get("scan") or {}).get("localized", math.nan))
        columns["consistent"].append(
            float(record.get("consistent")) if record["status"] == "ok" else math.nan
        )
    return columns


def run_scan(config: ScanInput) -> CommandOutcome:
    """Audit every point; exit 1 on any inconsistency, 2 if every point failed."""
    points = config.points
    logger.info("Auditing %d sweep point(s) with %d worker(s)", len(points), config.workers)
    if config.workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=min(config.workers, len(points))) as pool:
            futures = [
                pool.submit(audit_point, index, point, config.seed)
                for index, point in enumerate(points)
            ]
            records = [future.result() for future in futures]
    else:
        records = [audit_point(index, point, config.seed) for index, point in enumerate(points)]

    succeeded = [record for record in records if record["status"] == "ok"]
    inconsistent = [record["index"] for record in succeeded if not record["consistent"]]
    if not succeeded:
        exit_code = EXIT_FAILURE
    elif inconsistent:
        exit_code = EXIT_ACCEPTANCE_MISS
    else:
        exit_code = EXIT_OK

    path = report_path(config.out, "scan", ".jsonl" if config.output_format == "json" else ".csv")
    if config.output_format == "json":
        written = write_json_lines(records, path)
    else:
        written = write_csv(_summary_columns(records), path)

    summary = (
        f"scan: {len(succeeded)}/{len(records)} point(s) audited, "
        f"{len(inconsistent)} inconsistent"
    )
    return CommandOutcome(
        exit_code=exit_code,
        payload={"command": "scan", "records": records, "inconsistent": inconsistent},
        paths=(written,),
        messages=(summary,),
    )


def _build_input(
    sweep_file: Optional[Path],
    masses: Optional[list[float]],
    interactions: Optional[list[str]],
    charges: Optional[list[float]],
    spacings: Optional[list[float]],
    windows: Optional[list[str]],
    formula: str,
    **common: Any,
) -> ScanInput:
    if sweep_file is not None:
        return ScanInput.from_yaml(sweep_file, **common)
    if not (masses or interactions or charges or spacings or windows):
        return ScanInput(points=[], **common)
    return ScanInput.from_grid(
        masses=masses or [1.0],
        interactions=interactions or ["vnw"],
        charges=charges,
        spacings=spacings,
        windows=windows,
        formula=formula,
        **common,
    )


@app.command("scan")
def scan(
    sweep_file: Optional[Path] = typer.Option(None, "--sweep", help="YAML sweep file with a 'points' list."),
    masses: Optional[list[float]] = typer.Option(None, "--mass", help="Mass values (repeatable)."),
    interactions: Optional[list[str]] = typer.Option(
        None, "--interaction", help="vnw, zero, square_well or coulomb (repeatable)."
    ),
    charges: Optional[list[float]] = typer.Option(None, "--charge", help="Coulomb charges (repeatable)."),
    spacings: Optional[list[float]] = typer.Option(None, "--h", help="Grid spacings (repeatable)."),
    windows: Optional[list[str]] = typer.Option(None, "--window", help="Windows 'lo,hi' (repeatable)."),
    formula: str = typer.Option("derived", "--formula", help="'derived' or 'printed' vNW variant."),
    out: Optional[Path] = typer.Option(None, "--out", help="JSON-lines output path."),
    output_format: str = typer.Option("json", "--format", help="'json' lines or 'csv' summary."),
    workers: int = typer.Option(SETTINGS.solver.workers, "--workers", help="Worker processes."),
    seed: int = typer.Option(SETTINGS.solver.seed, "--seed", help="Inverse-iteration seed."),
) -> None:
    """Run theorem audits over a sweep of m, e, h and windows.

    Exit 0 if at least one point succeeded and no audit found an inconsistency.
    """
    finish(
        guarded(
            "scan",
            lambda: run_scan(
                _build_input(
                    sweep_file,
                    masses,
                    interactions,
                    charges,
                    spacings,
                    windows,
                    formula,
                    out=out,
                    output_format=output_format,
                    workers=workers,
                    seed=seed,
                )
            ),
        )
    )
