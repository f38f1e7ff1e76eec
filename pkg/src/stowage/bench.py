"""Benchmark protocol: every (instance, algorithm, seed) run reduced to one table row."""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .heuristics import PARAM_TYPES, solve
from .model import Instance

COLUMNS = ("instance", "algorithm", "seed", "initial", "iter5", "iter10", "best")
HEADERS = ("Problems", "Algorithm", "Seed", "Initial Solution", "5 Iterations", "10 Iterations", "Best Solution")


@dataclass(frozen=True)
class BenchRow:
    instance: str
    algorithm: str
    seed: int
    initial: int | None = None
    iter5: int | None = None
    iter10: int | None = None
    best: int | None = None
    wall_time: float = 0.0
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error

    def monotone(self) -> bool:
        return self.best <= self.iter10 <= self.iter5 <= self.initial


@dataclass
class BenchReport:
    rows: list[BenchRow]

    @property
    def failed(self) -> list[BenchRow]:
        return [r for r in self.rows if not r.ok]

    def to_csv(self, timing: bool = False) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = list(COLUMNS) + (["wall_time"] if timing else []) + ["error"]
        writer.writerow(header)
        for r in self.rows:
            values = [getattr(r, c) for c in COLUMNS]
            values = ["" if v is None else v for v in values]
            if timing:
                values.append(f"{r.wall_time:.3f}")
            values.append(r.error)
            writer.writerow(values)
        return buf.getvalue()

    def to_table(self) -> str:
        cells = [list(HEADERS)]
        for r in self.rows:
            if r.ok:
                cells.append([r.instance, r.algorithm, str(r.seed), *(str(getattr(r, c)) for c in COLUMNS[3:])])
            else:
                cells.append([r.instance, r.algorithm, str(r.seed), "failed: " + r.error, "", "", ""])
        widths = [max(len(row[n]) for row in cells) for n in range(len(HEADERS))]
        rule = "+" + "+".join("-" * (w + 2) for w in widths) + "+"
        lines = [rule]
        for n, row in enumerate(cells):
            lines.append("| " + " | ".join(v.ljust(w) for v, w in zip(row, widths)) + " |")
            if n == 0:
                lines.append(rule)
        lines.append(rule)
        return "\n".join(lines) + "\n"


def _run_one(job) -> BenchRow:
    instance, algorithm, seed, params = job
    name = instance.name or "unnamed"
    try:
        trace = solve(instance, algorithm, params, seed=seed)
    except Exception as exc:  # a failed row must not stop the protocol
        return BenchRow(name, algorithm, seed, error=f"{type(exc).__name__}: {exc}")
    return BenchRow(
        name, algorithm, seed,
        trace.initial, trace.at(5), trace.at(10), trace.best_value, trace.wall_time,
    )


def bench_threads() -> int:
    try:
        return max(1, int(os.environ.get("STOWAGE_THREADS", "1")))
    except ValueError:
        return 1


def run_bench(
    instances: Sequence[Instance],
    algorithms: Sequence[str],
    seeds: Sequence[int],
    params: dict | None = None,
    workers: int | None = None,
) -> BenchReport:
    """Run the cartesian product; rows come back in input order regardless of ``workers``."""
    params = params or {}
    jobs = [
        (inst, alg, seed, params.get(alg) or PARAM_TYPES[alg]())
        for inst in instances
        for alg in algorithms
        for seed in seeds
    ]
    workers = bench_threads() if workers is None else workers
    if workers <= 1 or len(jobs) <= 1:
        rows = [_run_one(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_one, jobs))
    return BenchReport(rows)
