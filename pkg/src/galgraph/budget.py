"""Explicit search budgets.

Every potentially exponential search in the package takes a :class:`Budget`
and raises :class:`BudgetExceeded` instead of returning a truncated answer.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field


class BudgetExceeded(RuntimeError):
    """A search ran out of nodes or time before finishing."""

    def __init__(self, what: str, used_nodes: int, elapsed: float) -> None:
        super().__init__(f"{what}: budget exhausted after {used_nodes} nodes / {elapsed:.1f}s")
        self.what = what
        self.used_nodes = used_nodes
        self.elapsed = elapsed


@dataclass
class Budget:
    max_nodes: int | None = 50_000_000
    max_seconds: float | None = None
    nodes: int = 0
    _start: float = field(default_factory=time.monotonic, repr=False)

    def tick(self, what: str = "search", n: int = 1) -> None:
        self.nodes += n
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded(what, self.nodes, self.elapsed)
        # clock reads are cheap but not free
        if self.max_seconds is not None and (self.nodes & 0x3FF) == 0:
            if self.elapsed > self.max_seconds:
                raise BudgetExceeded(what, self.nodes, self.elapsed)

    def check_time(self, what: str = "search") -> None:
        if self.max_seconds is not None and self.elapsed > self.max_seconds:
            raise BudgetExceeded(what, self.nodes, self.elapsed)

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self._start


def unlimited() -> Budget:
    return Budget(max_nodes=None, max_seconds=None)


def ensure(budget: Budget | None) -> Budget:
    return budget if budget is not None else Budget()
