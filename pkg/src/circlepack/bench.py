"""Benchmark harness: seeded solver runs over an instance set, hit-rate style.

Each (n, R, seed) cell is one independent global search. Records stream out
as tab-separated lines; summaries aggregate hit counts and mean success time
per instance, optionally across a sweep of initial group sizes. Cells can
run sequentially or across a bounded pool of worker processes; a failed run
is recorded and the harness moves on.
"""

from __future__ import annotations

import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from circlepack.energy import Instance
from circlepack.layoutfile import write_layout
from circlepack.search import SearchConfig, global_search
from circlepack.verify import DEFAULT_TOLERANCE, check_layout


@dataclass(frozen=True)
class BenchCell:
    """One scheduled solver run."""

    n: int
    R: float
    seed: int
    time_limit: float
    group_size: int = 100
    repeats: int = 10
    max_iter: int = 1000


@dataclass(frozen=True)
class BenchRecord:
    """Outcome of one run; ``feasible`` means solved and independently verified."""

    n: int
    R: float
    seed: int
    feasible: bool
    energy: float
    seconds: float
    descent_calls: int
    hops: int
    group_size: int
    error: Optional[str] = None

    def line(self) -> str:
        flag = 1 if self.feasible else 0
        return f"{self.n}\t{self.R!r}\t{self.seed}\t{flag}\t{self.energy!r}\t{self.seconds:.3f}"


@dataclass(frozen=True)
class BenchSummary:
    n: int
    R: float
    group_size: int
    runs: int
    hits: int
    mean_success_seconds: Optional[float]

    def line(self) -> str:
        mean = "-" if self.mean_success_seconds is None else f"{self.mean_success_seconds:.3f}"
        return (
            f"# n={self.n} R={self.R!r} group_size={self.group_size} "
            f"hits={self.hits}/{self.runs} mean_success_seconds={mean}"
        )


def run_cell(cell: BenchCell) -> Tuple[BenchRecord, Optional[np.ndarray]]:
    """Run one cell; never raises, failures come back in the record."""
    try:
        config = SearchConfig(
            seed=cell.seed,
            time_limit=cell.time_limit,
            group_size=cell.group_size,
            repeats=cell.repeats,
            max_iter=cell.max_iter,
        )
        outcome = global_search(Instance(cell.n, cell.R), config)
        feasible = outcome.feasible
        error = None
        if feasible:
            report = check_layout(outcome.layout, cell.R)
            if not report.feasible(DEFAULT_TOLERANCE):
                feasible = False
                error = "certificate mismatch: solver claimed feasibility"
        return (
            BenchRecord(
                n=cell.n,
                R=cell.R,
                seed=cell.seed,
                feasible=feasible,
                energy=outcome.energy,
                seconds=outcome.elapsed,
                descent_calls=outcome.descent_calls,
                hops=outcome.hops_executed,
                group_size=cell.group_size,
                error=error,
            ),
            outcome.layout,
        )
    except Exception as exc:  # noqa: BLE001 - harness must survive bad cells
        return (
            BenchRecord(
                n=cell.n,
                R=cell.R,
                seed=cell.seed,
                feasible=False,
                energy=float("nan"),
                seconds=0.0,
                descent_calls=0,
                hops=0,
                group_size=cell.group_size,
                error=f"{type(exc).__name__}: {exc}",
            ),
            None,
        )


def run_bench(
    cells: Sequence[BenchCell],
    jobs: int = 1,
    emit: Optional[Callable[[str], None]] = None,
    outdir: Optional[Path] = None,
) -> List[BenchRecord]:
    """Run all cells, streaming one record line each; returns the records."""
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    records: List[BenchRecord] = []

    def consume(record: BenchRecord, layout) -> None:
        records.append(record)
        if emit is not None:
            emit(record.line())
        if record.error is not None:
            print(
                f"bench: run n={record.n} seed={record.seed} failed: {record.error}",
                file=sys.stderr,
            )
        if outdir is not None and layout is not None:
            outdir.mkdir(parents=True, exist_ok=True)
            name = f"layout_n{record.n}_seed{record.seed}_s{record.group_size}.txt"
            write_layout(outdir / name, layout, record.R)

    if jobs == 1:
        for cell in cells:
            consume(*run_cell(cell))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for record, layout in pool.map(run_cell, cells):
                consume(record, layout)
    return records


def summarize(records: Sequence[BenchRecord]) -> List[BenchSummary]:
    """Aggregate hit counts per (n, R, group size), in first-seen order."""
    order = []
    buckets = {}
    for rec in records:
        key = (rec.n, rec.R, rec.group_size)
        if key not in buckets:
            buckets[key] = []
            order.append(key)
        buckets[key].append(rec)
    out = []
    for key in order:
        group = buckets[key]
        hits = [r for r in group if r.feasible]
        mean = sum(r.seconds for r in hits) / len(hits) if hits else None
        out.append(
            BenchSummary(
                n=key[0],
                R=key[1],
                group_size=key[2],
                runs=len(group),
                hits=len(hits),
                mean_success_seconds=mean,
            )
        )
    return out


def parse_sweep(text: str) -> List[int]:
    """Parse ``a:b:step`` into the inclusive list of group sizes to sweep."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("sweep must look like a:b:step")
    a, b, step = (int(p) for p in parts)
    if a < 1 or b < a or step < 1:
        raise ValueError("sweep requires 1 <= a <= b and step >= 1")
    return list(range(a, b + 1, step))


def expand_cells(
    instances: Sequence[Tuple[int, float]],
    seeds: Sequence[int],
    time_limit: float,
    group_sizes: Optional[Sequence[int]] = None,
    repeats: int = 10,
    max_iter: int = 1000,
) -> List[BenchCell]:
    """Cross instances x seeds (x optional group-size sweep) into cells."""
    base = BenchCell(n=1, R=1.0, seed=0, time_limit=time_limit, repeats=repeats, max_iter=max_iter)
    cells = []
    for gs in group_sizes or [base.group_size]:
        for n, R in instances:
            for seed in seeds:
                cells.append(replace(base, n=n, R=R, seed=seed, group_size=gs))
    return cells
