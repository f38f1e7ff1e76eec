from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Any

from ..model import Solution

SNAPSHOTS = (0, 5, 10)


@dataclass
class RunTrace:
    """Best-so-far objective per main-loop iteration of one run.

    ``best_values[0]`` is the initial value; ``best_values[t]`` the best seen
    after iteration ``t``. Snapshots past the end of a short run fall back to
    the final value.
    """

    algorithm: str
    seed: int | None
    best_values: list[int]
    best_solution: Solution
    params: dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def iterations(self) -> int:
        return len(self.best_values) - 1

    @property
    def initial(self) -> int:
        return self.best_values[0]

    @property
    def best_value(self) -> int:
        return self.best_values[-1]

    def at(self, iteration: int) -> int:
        return self.best_values[min(iteration, len(self.best_values) - 1)]

    @property
    def snapshots(self) -> dict[int, int]:
        return {t: self.at(t) for t in SNAPSHOTS}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["iteration", "best_value"])
        for t, value in enumerate(self.best_values):
            writer.writerow([t, value])
        return buf.getvalue()


class BestTracker:
    """Keeps the best plan seen and the per-iteration best-so-far values."""

    def __init__(self, plan):
        self.plan = plan.copy()
        self.values = [plan.value]

    def offer(self, plan) -> None:
        if plan.value < self.plan.value:
            self.plan = plan.copy()

    def close_iteration(self) -> None:
        self.values.append(self.plan.value)
