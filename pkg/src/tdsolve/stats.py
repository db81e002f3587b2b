"""Solver instrumentation shared by all algorithms."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

INF = float("inf")


@dataclass
class SolveStats:
    algorithm: str
    answer: int | bool | None = None
    wall_time_ms: float = 0.0
    peak_recursion_depth: int = 0
    peak_live_table_entries: int = 0
    total_convolution_element_ops: int = 0
    branch_nodes_visited: int = 0
    partitions_enumerated: int = 0
    # bound violations observed while solving; empty on a healthy run
    violations: list[str] = field(default_factory=list)

    _live: int = field(default=0, repr=False)
    _depth: int = field(default=0, repr=False)

    def enter(self) -> None:
        self._depth += 1
        self.branch_nodes_visited += 1
        if self._depth > self.peak_recursion_depth:
            self.peak_recursion_depth = self._depth

    def leave(self) -> None:
        self._depth -= 1

    def alloc(self, entries: int) -> None:
        self._live += entries
        if self._live > self.peak_live_table_entries:
            self.peak_live_table_entries = self._live

    def free(self, entries: int) -> None:
        self._live -= entries

    def violation(self, message: str) -> None:
        if len(self.violations) < 100:
            self.violations.append(message)

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("_live")
        d.pop("_depth")
        if isinstance(d["answer"], float):
            d["answer"] = None
        return d
