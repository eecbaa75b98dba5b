"""Basin-hopping global search around the grouped descent.

When a descent lands on an infeasible local minimum, the container is
temporarily shrunk by a factor grown per hop and per candidate, circles are
re-relaxed inside the smaller container, then relaxed again at the true
radius. The best of the resulting candidate layouts replaces the incumbent
only on strict improvement, so the incumbent energy never rises.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from circlepack.bfgs import ENERGY_STOP, LineSearchSpec
from circlepack.descent import DEFAULT_GROUP_SIZE, DEFAULT_REPEATS, grouped_descent
from circlepack.energy import Instance, as_layout


@dataclass(frozen=True)
class SearchConfig:
    """Tunables for one global search run.

    ``alpha`` is the initial container shrink scale, ``beta`` its growth per
    hop, and ``candidates`` the number of perturbed layouts generated per
    hop. ``group_size``/``repeats`` seed the descent schedule.
    """

    alpha: float = 0.4
    beta: float = 0.03
    candidates: int = 10
    group_size: int = DEFAULT_GROUP_SIZE
    repeats: int = DEFAULT_REPEATS
    seed: int = 0
    time_limit: float = 900.0
    max_iter: int = 1000
    energy_threshold: float = ENERGY_STOP
    line_search_spec: Optional[LineSearchSpec] = None

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.beta <= 0.0:
            raise ValueError("beta must be positive")
        if self.candidates < 1:
            raise ValueError("candidates must be at least 1")
        if self.group_size < 1 or self.repeats < 1:
            raise ValueError("group_size and repeats must be at least 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.time_limit < 0.0:
            raise ValueError("time_limit must be non-negative")
        if self.energy_threshold <= 0.0:
            raise ValueError("energy_threshold must be positive")
        if self.hop_cycle < 1:
            raise ValueError("beta must not exceed 1 - alpha (empty hop cycle)")
        if not self.alpha + self.beta * (self.hop_cycle - 1) < 1.0:
            raise ValueError("shrink scale reaches 1 within the hop cycle")

    @property
    def hop_cycle(self) -> int:
        """Number of hops before the shrink progression wraps around."""
        return int(math.floor((1.0 - self.alpha) / self.beta))


@dataclass
class SearchOutcome:
    """Result of a global search run."""

    layout: np.ndarray
    energy: float
    feasible: bool
    hops_executed: int
    descent_calls: int
    elapsed: float


def shrink_factor(alpha: float, beta: float, hops: int, m: int, k: int) -> float:
    """Container shrink scale for candidate ``k`` of hop ``hops``.

    Grows with the hop counter and interpolates toward 1 across the ``m``
    candidates of one hop; always strictly inside (0, 1) for valid inputs.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if not 0 <= k <= m - 1:
        raise ValueError(f"candidate index k must lie in [0, {m - 1}], got {k}")
    cycle = int(math.floor((1.0 - alpha) / beta))
    if not 0 <= hops < cycle:
        raise ValueError(f"hops must lie in [0, {cycle - 1}], got {hops}")
    base = alpha + beta * hops
    gamma = base + ((1.0 - base) / m) * k
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"shrink factor {gamma} escaped (0, 1)")
    return gamma


def random_initial_layout(instance: Instance, rng: np.random.Generator) -> np.ndarray:
    """Centers drawn uniformly from the disk where circles clear the wall."""
    reach = max(instance.R - 1.0, 0.0)
    radius = reach * np.sqrt(rng.random(instance.n))
    angle = 2.0 * np.pi * rng.random(instance.n)
    return np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])


def global_search(
    instance: Instance,
    config: Optional[SearchConfig] = None,
    initial_layout=None,
) -> SearchOutcome:
    """Search for a zero-energy layout of the instance within the time limit.

    Runs one descent from a random layout, then basin-hops (shrink, relax,
    re-relax at full radius) until feasibility or timeout. The wall clock is
    consulted only between descent calls, so the limit can overshoot by one
    candidate relaxation.
    """
    config = config or SearchConfig()
    rng = np.random.default_rng(config.seed)
    started = time.monotonic()

    def out_of_time() -> bool:
        return time.monotonic() - started >= config.time_limit

    def descend(layout, inst):
        return grouped_descent(
            layout,
            inst,
            rng,
            group_size=config.group_size,
            repeats=config.repeats,
            max_iter=config.max_iter,
            energy_threshold=config.energy_threshold,
            line_search_spec=config.line_search_spec,
        )

    if initial_layout is None:
        layout = random_initial_layout(instance, rng)
    else:
        layout = as_layout(initial_layout, instance)
    best, report = descend(layout, instance)
    best_energy = report.total_energy
    descent_calls = 1

    hops = 0
    hops_executed = 0
    while best_energy > config.energy_threshold and not out_of_time():
        candidate_best = None
        candidate_energy = np.inf
        completed = True
        for k in range(config.candidates):
            if out_of_time():
                completed = False
                break
            gamma = shrink_factor(config.alpha, config.beta, hops, config.candidates, k)
            shrunk = Instance(instance.n, max(gamma * instance.R, 1.0))
            squeezed, _ = descend(best, shrunk)
            relaxed, rep = descend(squeezed, instance)
            descent_calls += 2
            if rep.total_energy < candidate_energy:
                candidate_best = relaxed
                candidate_energy = rep.total_energy
        if candidate_best is not None and candidate_energy < best_energy:
            best = candidate_best
            best_energy = candidate_energy
        if not completed:
            break
        hops = (hops + 1) % config.hop_cycle
        hops_executed += 1

    elapsed = time.monotonic() - started
    return SearchOutcome(
        layout=best,
        energy=best_energy,
        feasible=best_energy <= config.energy_threshold,
        hops_executed=hops_executed,
        descent_calls=descent_calls,
        elapsed=elapsed,
    )
