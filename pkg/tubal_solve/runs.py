from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class RunStatus(Enum):
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class RunItem:
    label: str
    id: int
    status: RunStatus = RunStatus.PENDING
    detail: str = ""


@dataclass
class RunBoard:
    items: list[RunItem] = field(default_factory=list)
    title: str = "Runs"

    def add_run(self, label: str, status: RunStatus = RunStatus.PENDING) -> int:
        item = RunItem(label=label, id=len(self.items), status=status)
        self.items.append(item)
        return item.id

    def update_run(self, id: int, status: RunStatus, detail: str = "") -> bool:
        item = self.get_run(id)
        if item is None:
            return False
        item.status = status
        item.detail = detail
        return True

    def get_run(self, id: int) -> Optional[RunItem]:
        if 0 <= id < len(self.items):
            return self.items[id]
        return None

    def count(self, status: RunStatus) -> int:
        return sum(1 for item in self.items if item.status is status)
