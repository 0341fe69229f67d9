"""
Main CLI entry point for tubal-solve.
"""

import argparse
import asyncio
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, stats
from .config import COMMANDS, create_sample_spec, load_spec
from .errors import ConfigError, TubalError
from .experiments import create_registry
from .log import setup_logging
from .runs import RunStatus
from .ui import ui

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUN = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tubal-solve",
        description="Low-tubal-rank tensor recovery by factorized gradient descent",
    )
    parser.add_argument(
        "command",
        choices=COMMANDS,
        help="Experiment to run",
    )
    parser.add_argument(
        "--config",
        "-c",
        type=Path,
        required=True,
        help="Experiment config (key=value text, or YAML with a .yaml suffix)",
    )
    parser.add_argument(
        "--out",
        "-o",
        type=Path,
        help="Output directory (overrides the config's out key)",
    )
    parser.add_argument(
        "--workers",
        "-w",
        type=int,
        help="Number of grid points run concurrently",
    )
    parser.add_argument(
        "--aggregate",
        action="store_true",
        help="Also write mean/median per grid point over repeats",
    )
    parser.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="Debug logging",
    )
    parser.add_argument(
        "--init",
        action="store_true",
        help="Write a sample config to the --config path and exit",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.init:
        setup_logging(args.verbose)
        if create_sample_spec(args.config):
            ui.console.print(f"[green]Created sample config {args.config}[/green]")
        else:
            ui.console.print(f"[yellow]{args.config} already exists; left unchanged[/yellow]")
        return EXIT_OK

    try:
        spec = load_spec(args.config)
        overrides = {"command": args.command}
        if args.workers is not None:
            overrides["workers"] = args.workers
        if args.out is not None:
            overrides["out"] = str(args.out)
        spec = replace(spec, **overrides)
    except ConfigError as exc:
        setup_logging(args.verbose)
        ui.print_error(str(exc))
        return EXIT_CONFIG

    setup_logging(args.verbose or spec.verbose)
    command = create_registry().get(spec.command)
    ui.print_banner(__version__)
    ui.print_phase(command.name, command.description)

    try:
        result = asyncio.run(
            command.execute(
                spec, Path(spec.out), config_path=args.config, aggregate=args.aggregate
            )
        )
    except ConfigError as exc:
        ui.print_error(str(exc))
        return EXIT_CONFIG
    except OSError as exc:
        # FormatError is an OSError as well
        ui.print_error(str(exc))
        return EXIT_IO
    except TubalError as exc:
        ui.print_error(str(exc))
        return EXIT_RUN

    ui.print_table(
        command.name,
        result.columns,
        [[row.get(column) for column in result.columns] for row in result.rows],
    )
    if result.board is not None and result.board.count(RunStatus.FAILED):
        ui.print_board(result.board)
    ui.print_result(result.output, result.success)
    summary = stats.get_stats()
    ui.print_stats(
        {
            "runs": summary.total_runs,
            "failed": summary.failed_runs,
            "iterations": summary.total_iterations,
        }
    )
    if not result.success:
        ui.print_error(result.error or "run failed")
        return EXIT_RUN
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
