"""Command-line subcommands.

This module imports all command submodules to register them with the Typer app.
Each command module uses the @app.command() decorator to register its subcommand
and exposes a ``run_*`` function that takes the validated input model.
"""

# Import all command modules to register their @app.command() decorated functions
from kg_spectra.commands import vnw_commands
from kg_spectra.commands import condition_commands
from kg_spectra.commands import coulomb_commands
from kg_spectra.commands import scan_commands

__all__ = [
    "vnw_commands",
    "condition_commands",
    "coulomb_commands",
    "scan_commands",
]
