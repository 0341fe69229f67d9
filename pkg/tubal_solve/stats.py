"""
Simple run statistics tracking.
"""

from dataclasses import dataclass, field
from typing import Dict


@dataclass
class RunStats:
    total_runs: int = 0
    runs_by_command: Dict[str, int] = field(default_factory=dict)
    failed_runs: int = 0
    total_iterations: int = 0

    def record_run(self, command: str = "unknown", iterations: int = 0, failed: bool = False):
        self.total_runs += 1
        self.runs_by_command[command] = self.runs_by_command.get(command, 0) + 1
        self.total_iterations += iterations
        if failed:
            self.failed_runs += 1

    def reset(self):
        self.total_runs = 0
        self.runs_by_command.clear()
        self.failed_runs = 0
        self.total_iterations = 0


_global_stats = RunStats()


def get_stats() -> RunStats:
    return _global_stats


def record_run(command: str = "unknown", iterations: int = 0, failed: bool = False):
    _global_stats.record_run(command, iterations, failed)


def reset_stats():
    _global_stats.reset()
