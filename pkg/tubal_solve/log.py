"""
Logging setup for the command line.
"""

import logging

from rich.logging import RichHandler

from .ui import console


def setup_logging(verbose: bool = False) -> None:
    """Route the package loggers through rich; DEBUG with ``verbose``, INFO otherwise."""
    level = logging.DEBUG if verbose else logging.INFO
    handler = RichHandler(console=console, show_path=verbose, rich_tracebacks=verbose, markup=False)
    handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))

    root = logging.getLogger("tubal_solve")
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False
