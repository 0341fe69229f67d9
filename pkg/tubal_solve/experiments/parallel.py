"""
Grid execution with a bounded number of worker processes.
"""

import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Optional, Sequence, TypeVar, Union

from ..config import RunSpec
from ..runs import RunBoard, RunStatus
from ..ui import ui

logger = logging.getLogger(__name__)

T = TypeVar("T")


async def run_grid(
    task: Callable[[RunSpec], T],
    runs: Sequence[RunSpec],
    workers: int = 1,
    label: str = "runs",
    board: Optional[RunBoard] = None,
) -> list[Union[T, BaseException]]:
    """Run ``task`` on every run, at most ``workers`` at a time.

    Results come back in the order of ``runs`` whatever the completion order;
    an exception raised for one run takes its slot instead of a result.
    ``task`` must be picklable when ``workers > 1``.
    """
    semaphore = asyncio.Semaphore(workers)
    loop = asyncio.get_running_loop()
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None

    with ui.create_progress() as progress:
        progress_id = progress.add_task(label, total=len(runs))

        async def run_one(index: int, run: RunSpec):
            async with semaphore:
                if board is not None:
                    board.update_run(index, RunStatus.RUNNING)
                try:
                    if executor is None:
                        return task(run)
                    return await loop.run_in_executor(executor, task, run)
                finally:
                    progress.advance(progress_id)

        try:
            results = await asyncio.gather(
                *(run_one(index, run) for index, run in enumerate(runs)),
                return_exceptions=True,
            )
        finally:
            if executor is not None:
                executor.shutdown()

    for run, result in zip(runs, results):
        if isinstance(result, BaseException):
            logger.warning("point %d repeat %d raised %r", run.point.index, run.repeat, result)
    return list(results)
