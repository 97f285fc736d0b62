"""Typer application and logging setup."""

import logging

import typer

from kg_spectra.config import SETTINGS

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="kg-spectra",
    help=(
        "Spectral analysis of Klein-Gordon operators: embedded eigenvalues of the "
        "von Neumann-Wigner problem, operator hypotheses and Coulomb absence regions. "
        "Exit codes: 0 success, 1 acceptance miss, 2 parameter or numerical failure."
    ),
    no_args_is_help=True,
    add_completion=False,
    pretty_exceptions_enable=False,
)

# Command modules are imported in __init__.py to register their @app.command() functions


@app.callback()
def configure(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at DEBUG level."),
) -> None:
    """Configure logging once for every subcommand."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else SETTINGS.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def run() -> None:
    """Run the command-line application."""
    app()


if __name__ == "__main__":
    run()
