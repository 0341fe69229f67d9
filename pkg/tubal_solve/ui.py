"""
Console output for tubal-solve: banner, phase headers, result tables and error boxes.
"""

from typing import Optional, Sequence

from rich.box import ROUNDED
from rich.console import Console, RenderableType
from rich.panel import Panel
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table
from rich.text import Text

from .runs import RunBoard, RunStatus

console = Console(stderr=True)

STATUS_ICONS = {
    RunStatus.PENDING: ("○", "dim"),
    RunStatus.RUNNING: ("●", "yellow"),
    RunStatus.COMPLETED: ("✓", "green"),
    RunStatus.FAILED: ("✗", "red"),
}


class RunBoardRenderer:
    """Renders the status board of grid runs; only failures are listed by name."""

    def __init__(self, board: RunBoard, max_rows: int = 10):
        self.board = board
        self.max_rows = max_rows

    def __rich__(self) -> RenderableType:
        table = Table(box=None, show_header=False, padding=(0, 2))
        table.add_column("Status", width=3)
        table.add_column("Run")
        table.add_column("Detail", style="dim")

        for status in (RunStatus.COMPLETED, RunStatus.RUNNING, RunStatus.PENDING):
            icon, style = STATUS_ICONS[status]
            table.add_row(Text(icon, style=style), Text(status.value, style=style), str(self.board.count(status)))

        failed = [item for item in self.board.items if item.status is RunStatus.FAILED]
        icon, style = STATUS_ICONS[RunStatus.FAILED]
        for item in failed[: self.max_rows]:
            table.add_row(Text(icon, style=style), Text(item.label, style=style), item.detail[:60])
        if len(failed) > self.max_rows:
            table.add_row("", Text(f"... {len(failed) - self.max_rows} more failures", style="dim"), "")

        return Panel(
            table,
            title=f"[bold]{self.board.title}[/bold]",
            border_style="cyan",
            box=ROUNDED,
            padding=(0, 1),
        )


class ConsoleUI:
    def __init__(self, output: Optional[Console] = None):
        self.console = output or console

    def print_banner(self, version: str):
        self.console.print(f"[bold cyan]tubal-solve[/bold cyan] [dim]{version}[/dim]")

    def print_phase(self, phase: str, description: str = ""):
        self.console.print()
        self.console.print(f"[bold blue]╭─ ▶ {phase} ─{'─' * max(4, 45 - len(phase))}[/bold blue]")
        if description:
            self.console.print(f"[bold blue]│[/bold blue] [dim]{description}[/dim]")
        self.console.print(f"[bold blue]╰──────────────────────────────────────────────────[/bold blue]")

    def create_progress(self) -> Progress:
        return Progress(
            TextColumn("[cyan]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
            console=self.console,
            transient=True,
        )

    def print_board(self, board: RunBoard):
        self.console.print(RunBoardRenderer(board))

    def print_table(self, title: str, columns: Sequence[str], rows: Sequence[Sequence], limit: int = 40):
        table = Table(title=title, box=ROUNDED, header_style="bold cyan")
        for column in columns:
            table.add_column(column, justify="right")
        for row in rows[:limit]:
            table.add_row(*(_cell(value) for value in row))
        self.console.print(table)
        if len(rows) > limit:
            self.console.print(f"[dim]... {len(rows) - limit} more rows[/dim]")

    def print_result(self, output: str, success: bool = True):
        status = "[green]✓[/green]" if success else "[red]✗[/red]"
        for line in output.split("\n")[:20]:
            if line.strip():
                self.console.print(f"[dim]│[/dim] {line[:100]}")
        self.console.print(f"[cyan]╰─ {status} done[/cyan]")

    def print_error(self, error: str):
        self.console.print()
        self.console.print(f"[red]╭─ ✗ Error ─{'─' * 48}[/red]")
        for line in error.split("\n")[:10]:
            self.console.print(f"[red]│[/red] {line[:90]}")
        self.console.print("[red]╰──────────────────────────────────────────────────[/red]")

    def print_stats(self, stats_data: dict):
        self.console.print()
        self.console.print(f"[yellow]╭─ Statistics ─{'─' * 44}[/yellow]")
        for key, value in stats_data.items():
            self.console.print(f"[yellow]│[/yellow] [cyan]{key}:[/cyan] {value}")
        self.console.print("[yellow]╰──────────────────────────────────────────────────[/yellow]")


def _cell(value) -> str:
    if value is None or value == "":
        return "-"
    if isinstance(value, float):
        return f"{value:.4g}"
    return str(value)


ui = ConsoleUI()
