"""Round-based descent over randomly grouped circles.

Each round shuffles the circles into groups of a fixed size and runs the
per-group optimizer on every group in sequence, so later groups see the
already-improved positions of earlier ones. Rounds repeat a few times, then
the group size doubles and the repeat count halves until a single group
holds the whole layout; that terminal round polishes the full system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from circlepack.bfgs import ENERGY_STOP, LineSearchSpec, LocalBfgsResult, local_bfgs
from circlepack.energy import EnergyReport, Instance, as_layout, total_energy

DEFAULT_GROUP_SIZE = 100
DEFAULT_REPEATS = 10


@dataclass(frozen=True)
class RoundSchedule:
    """Sequence of (group size, repetitions) pairs ending in one full group."""

    rounds: tuple

    def __iter__(self):
        return iter(self.rounds)

    def __len__(self) -> int:
        return len(self.rounds)


def make_schedule(
    n: int, group_size: int = DEFAULT_GROUP_SIZE, repeats: int = DEFAULT_REPEATS
) -> RoundSchedule:
    """Doubling group-size schedule for ``n`` circles.

    Starts from ``min(group_size, n)`` (small instances begin at the full
    system) and stops with the first round whose group count is 1.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if group_size < 1 or repeats < 1:
        raise ValueError("group_size and repeats must be at least 1")
    s = min(group_size, n)
    k = repeats
    rounds = [(s, k)]
    while n // s > 1:
        s = min(2 * s, n)
        k = max(k // 2, 1)
        rounds.append((s, k))
    return RoundSchedule(tuple(rounds))


def random_partition(n: int, s: int, rng: np.random.Generator) -> list:
    """Shuffle circles into ``n // s`` groups; the last absorbs the remainder.

    Groups come back as sorted index arrays, pairwise disjoint and covering
    every circle exactly once. Deterministic for a given generator state.
    """
    if not 1 <= s <= n:
        raise ValueError(f"group size must lie in [1, {n}], got {s}")
    perm = rng.permutation(n)
    g = n // s
    groups = [np.sort(perm[i * s : (i + 1) * s]) for i in range(g - 1)]
    groups.append(np.sort(perm[(g - 1) * s :]))
    return groups


def grouped_descent(
    layout,
    instance: Instance,
    rng: np.random.Generator,
    group_size: int = DEFAULT_GROUP_SIZE,
    repeats: int = DEFAULT_REPEATS,
    max_iter: int = 1000,
    energy_threshold: float = ENERGY_STOP,
    line_search_spec: Optional[LineSearchSpec] = None,
    on_group_result: Optional[Callable[[LocalBfgsResult], None]] = None,
) -> tuple:
    """Descend the layout energy through the full round schedule.

    Returns the final layout and its :class:`EnergyReport`. Exits early as
    soon as a completed partition pass leaves the whole layout at or below
    ``energy_threshold``.
    """
    current = as_layout(layout, instance)
    n = instance.n
    for s, k in make_schedule(n, group_size, repeats):
        for _ in range(k):
            for group in random_partition(n, s, rng):
                result = local_bfgs(
                    current,
                    group,
                    instance,
                    max_iter=max_iter,
                    line_search_spec=line_search_spec,
                )
                current = result.layout
                if on_group_result is not None:
                    on_group_result(result)
            report = total_energy(current, instance, strategy="dense")
            if report.total_energy <= energy_threshold:
                return current, report
    return current, total_energy(current, instance, strategy="dense")
