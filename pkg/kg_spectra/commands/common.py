"""Helpers shared by the subcommands: outcomes, output paths and exit-code mapping."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

import typer
from pydantic import ValidationError

from kg_spectra.config import SETTINGS, resolve_output_dir
from kg_spectra.constants import EXIT_ACCEPTANCE_MISS, EXIT_FAILURE, EXIT_OK
from kg_spectra.errors import KGSpectraError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommandOutcome:
    """Result of one subcommand run: exit code, files written and the report payload."""

    exit_code: int
    payload: dict[str, Any]
    paths: tuple[Path, ...] = ()
    messages: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.exit_code == EXIT_OK


def acceptance_code(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_ACCEPTANCE_MISS


def report_path(out: Optional[Path], default_name: str, suffix: str = ".json") -> Path:
    """Path of the report file: ``--out`` if given, else ``<output_dir>/<default_name>``."""
    if out is not None:
        return out if out.suffix else out.with_suffix(suffix)
    return resolve_output_dir(SETTINGS) / f"{default_name}{suffix}"


def sibling(path: Path, suffix: str) -> Path:
    """Companion file next to a report, e.g. the CSV beside a JSON document."""
    return path.with_suffix(suffix)


def failure_outcome(command: str, exc: BaseException) -> CommandOutcome:
    """Outcome for a parameter or computational failure (exit 2)."""
    if isinstance(exc, ValidationError):
        message = f"Invalid parameters for {command}: {exc}"
    elif isinstance(exc, KGSpectraError):
        message = f"{command} failed: {exc}"
    else:
        message = f"{command} failed with {type(exc).__name__}: {exc}"
    logger.error(message)
    return CommandOutcome(
        exit_code=EXIT_FAILURE,
        payload={"command": command, "error": {"type": type(exc).__name__, "message": str(exc)}},
        messages=(message,),
    )


def guarded(command: str, run: Callable[[], CommandOutcome]) -> CommandOutcome:
    """Run a subcommand body and turn any exception into an exit-2 outcome."""
    try:
        return run()
    except Exception as exc:  # noqa: BLE001 - every failure maps to exit code 2
        logger.debug("%s raised", command, exc_info=True)
        return failure_outcome(command, exc)


def finish(outcome: CommandOutcome) -> None:
    """Echo the outcome and exit the process with its code."""
    for path in outcome.paths:
        typer.echo(f"wrote {path}")
    for message in outcome.messages:
        typer.echo(message, err=outcome.exit_code != EXIT_OK)
    raise typer.Exit(code=outcome.exit_code)
