"""Standalone feasibility verification for circle layouts.

Implements the packing constraints directly: every center at least one unit
inside the container wall, every pair of centers at least two units apart.
Deliberately written with plain Python loops and math.hypot, sharing no code
with the energy model, so it can certify the solver's claims independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CheckReport:
    """Worst constraint violations of a layout, plus its penalty energy."""

    n: int
    R: float
    max_pair_violation: float
    max_container_violation: float
    energy: float

    def feasible(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return (
            self.max_pair_violation <= tolerance
            and self.max_container_violation <= tolerance
        )


def check_layout(centers, R: float) -> CheckReport:
    """Measure how far a layout is from satisfying the packing constraints."""
    pts = [(float(p[0]), float(p[1])) for p in centers]
    n = len(pts)
    if n < 1:
        raise ValueError("layout must contain at least one circle")
    for x, y in pts:
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError("layout coordinates must be finite")

    max_container = 0.0
    for x, y in pts:
        violation = math.hypot(x, y) + 1.0 - R
        if violation > max_container:
            max_container = violation

    max_pair = 0.0
    for i in range(n):
        xi, yi = pts[i]
        for j in range(i + 1, n):
            violation = 2.0 - math.hypot(xi - pts[j][0], yi - pts[j][1])
            if violation > max_pair:
                max_pair = violation

    # penalty energy under the same per-circle convention as the solver:
    # each circle sums its own squared violations, so pairs count twice
    energy = 0.0
    for i in range(n):
        xi, yi = pts[i]
        u_i = max(math.hypot(xi, yi) + 1.0 - R, 0.0) ** 2
        for j in range(n):
            if j == i:
                continue
            depth = max(2.0 - math.hypot(xi - pts[j][0], yi - pts[j][1]), 0.0)
            u_i += depth * depth
        energy += u_i

    return CheckReport(
        n=n,
        R=R,
        max_pair_violation=max_pair,
        max_container_violation=max_container,
        energy=energy,
    )
