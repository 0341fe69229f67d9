"""
Experiment commands for tubal-solve.
Each command expands the config grid, runs every point and writes CSV tables plus a manifest.
"""

from .base import Command, CommandRegistry, CommandResult, RunOutcome
from .synth import SynthCommand
from .recover import RecoverCommand, SweepCommand
from .complete import CompleteCommand
from .probe import TripProbeCommand

__all__ = [
    "Command",
    "CommandRegistry",
    "CommandResult",
    "RunOutcome",
    "SynthCommand",
    "RecoverCommand",
    "SweepCommand",
    "CompleteCommand",
    "TripProbeCommand",
    "get_default_commands",
    "create_registry",
]


def get_default_commands() -> list[Command]:
    return [
        SynthCommand(),
        RecoverCommand(),
        SweepCommand(),
        CompleteCommand(),
        TripProbeCommand(),
    ]


def create_registry() -> CommandRegistry:
    registry = CommandRegistry()
    for command in get_default_commands():
        registry.register(command)
    return registry
