"""Shared test helpers: independent oracles and layout generators.

The oracles here are written against the problem statement directly (plain
Python, math.hypot) and share no code with the package, so they can vouch
for it.
"""

import math

import numpy as np


def brute_subset_energy(centers, selection, R):
    """Literal per-circle energy: container term plus every overlapping partner."""
    n = len(centers)
    total = 0.0
    for i in selection:
        xi, yi = float(centers[i][0]), float(centers[i][1])
        u_i = max(math.hypot(xi, yi) + 1.0 - R, 0.0) ** 2
        for j in range(n):
            if j == i:
                continue
            d = max(2.0 - math.hypot(xi - float(centers[j][0]), yi - float(centers[j][1])), 0.0)
            u_i += d * d
        total += u_i
    return total


def brute_total_energy(centers, R):
    return brute_subset_energy(centers, range(len(centers)), R)


def random_layout(rng, n, R, spread=1.0):
    """n centers uniform in a disk of radius spread*(R-1); spread<1 forces overlap."""
    radius = max(R - 1.0, 0.0) * spread
    r = radius * np.sqrt(rng.random(n))
    t = 2.0 * np.pi * rng.random(n)
    return np.column_stack([r * np.cos(t), r * np.sin(t)])


def layout_clear_of_kinks(rng, n, R, spread=1.0, margin=2e-5, tries=200):
    """Random layout with no pair or container distance near a depth kink.

    Central differences straddle the max(., 0) kink when a constraint sits
    within the step of being exactly tight, so gradient checks sample away
    from that measure-zero neighborhood.
    """
    for _ in range(tries):
        centers = random_layout(rng, n, R, spread)
        diffs = centers[:, None, :] - centers[None, :, :]
        dist = np.sqrt((diffs**2).sum(axis=2))
        iu = np.triu_indices(n, k=1)
        wall = np.abs(np.linalg.norm(centers, axis=1) + 1.0 - R)
        if n > 1 and np.any(np.abs(dist[iu] - 2.0) < margin):
            continue
        if np.any(wall < margin):
            continue
        return centers
    raise AssertionError("could not sample a layout away from depth kinks")


def hexagonal_layout():
    """One circle at the origin ringed by six tangent neighbors (fits R=3)."""
    pts = [(0.0, 0.0)]
    for k in range(6):
        a = math.pi * k / 3.0
        pts.append((2.0 * math.cos(a), 2.0 * math.sin(a)))
    return np.array(pts)
