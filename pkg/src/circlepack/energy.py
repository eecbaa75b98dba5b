"""Elastic overlap energy for unit-circle layouts in a circular container.

Circles are elastic unit disks and the container is a rigid disk of radius R
centered at the origin. Squeezing two circles together, or a circle against
the container wall, stores energy equal to the squared overlap depth. The
per-circle energy counts every overlapping partner, so a circle-circle pair
contributes twice to the total; the gradient follows the same convention.
A layout is feasible exactly when the energy is zero.

Energy and gradient can be restricted to a movable subset of circles (the
complement stays frozen), which is what the per-group optimizer consumes.
Candidate overlap pairs are enumerated either densely or through a uniform
grid of cell size 2; the grid only discards pairs whose separation provably
exceeds 2, and terms are always accumulated in one canonical order, so every
strategy returns bit-identical values.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from numba import njit

logger = logging.getLogger(__name__)

# Distance below which the overlap direction between two circles is treated
# as numerically undefined.
SINGULARITY_DISTANCE = 1e-12
# Deterministic displacement applied to recover a usable direction.
SINGULARITY_NUDGE = 1e-9

# Public one-shot evaluations enumerate all pairs up to this size and switch
# to the uniform grid beyond it.
ALL_PAIRS_MAX_N = 64

_CELL = 2.0
_EMPTY_IDX = np.empty(0, dtype=np.int64)


class SingularOverlapError(RuntimeError):
    """Raised when overlapping circles stay coincident even after nudging."""


@dataclass(frozen=True)
class Instance:
    """Problem statement: pack ``n`` unit circles into a container of radius ``R``."""

    n: int
    R: float

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise TypeError(f"circle count must be an integer, got {self.n!r}")
        if self.n < 1:
            raise ValueError(f"circle count must be at least 1, got {self.n}")
        if not math.isfinite(self.R):
            raise ValueError("container radius must be finite")
        if self.R < 1.0:
            raise ValueError(
                f"container radius must be at least 1 (one unit circle), got {self.R}"
            )


@dataclass(frozen=True)
class EnergyReport:
    """Energy of a full layout plus the worst constraint violations."""

    total_energy: float
    max_pair_overlap: float
    max_container_overlap: float
    gradient_norm: float


def as_layout(centers, instance: Optional[Instance] = None) -> np.ndarray:
    """Validate and return circle centers as a float array of shape (n, 2)."""
    arr = np.ascontiguousarray(centers, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"layout must have shape (n, 2), got {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError("layout must contain at least one circle")
    if instance is not None and arr.shape[0] != instance.n:
        raise ValueError(
            f"layout has {arr.shape[0]} circles but the instance expects {instance.n}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("layout coordinates must be finite")
    return arr


def as_selection(indices: Iterable[int], n: int) -> np.ndarray:
    """Validate circle indices (0-based) and return them sorted ascending."""
    idx = np.asarray(indices if hasattr(indices, "__len__") else list(indices)).ravel()
    if idx.size == 0:
        raise ValueError("selection must contain at least one circle")
    if not np.issubdtype(idx.dtype, np.integer):
        raise TypeError(f"selection indices must be integers, got dtype {idx.dtype}")
    idx = np.sort(idx.astype(np.int64))
    if idx[0] < 0 or idx[-1] >= n:
        raise ValueError(f"selection indices must lie in [0, {n - 1}]")
    if np.any(np.diff(idx) == 0):
        raise ValueError("selection contains duplicate indices")
    return idx


def circle_overlap_depth(center_a: Sequence[float], center_b: Sequence[float]) -> float:
    """Depth by which two unit circles interpenetrate (0 when separated)."""
    dx = float(center_a[0]) - float(center_b[0])
    dy = float(center_a[1]) - float(center_b[1])
    return max(2.0 - math.sqrt(dx * dx + dy * dy), 0.0)


def container_overlap_depth(center: Sequence[float], R: float) -> float:
    """Depth by which a unit circle sticks out of the container (0 when inside)."""
    x = float(center[0])
    y = float(center[1])
    return max(math.sqrt(x * x + y * y) + 1.0 - R, 0.0)


# ---------------------------------------------------------------------------
# numba kernels
#
# All kernels accumulate sequentially in one canonical term order: container
# terms over the selection (ascending), then both-selected pairs (ascending),
# then selected-complement pairs (selected index major, complement minor).
# Keeping that order identical everywhere is what makes the enumeration
# strategies bit-identical; do not reorder the loops.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _dense_energy(sel_pos, comp_pos, radius):
    s = sel_pos.shape[0]
    c = comp_pos.shape[0]
    total = 0.0
    max_pair = 0.0
    max_cont = 0.0
    for a in range(s):
        x = sel_pos[a, 0]
        y = sel_pos[a, 1]
        d = math.sqrt(x * x + y * y) + 1.0 - radius
        if d > 0.0:
            total += d * d
            if d > max_cont:
                max_cont = d
    for a in range(s):
        ax = sel_pos[a, 0]
        ay = sel_pos[a, 1]
        for b in range(a + 1, s):
            dx = ax - sel_pos[b, 0]
            dy = ay - sel_pos[b, 1]
            q = dx * dx + dy * dy
            if q < 4.0:
                d = 2.0 - math.sqrt(q)
                total += 2.0 * (d * d)
                if d > max_pair:
                    max_pair = d
    for a in range(s):
        ax = sel_pos[a, 0]
        ay = sel_pos[a, 1]
        for b in range(c):
            dx = ax - comp_pos[b, 0]
            dy = ay - comp_pos[b, 1]
            q = dx * dx + dy * dy
            if q < 4.0:
                d = 2.0 - math.sqrt(q)
                total += d * d
                if d > max_pair:
                    max_pair = d
    return total, max_pair, max_cont


@njit(cache=True)
def _dense_gradient(sel_pos, comp_pos, radius, out):
    s = sel_pos.shape[0]
    c = comp_pos.shape[0]
    min_r = np.inf
    for a in range(s):
        x = sel_pos[a, 0]
        y = sel_pos[a, 1]
        nrm = math.sqrt(x * x + y * y)
        d = nrm + 1.0 - radius
        if d > 0.0:
            coef = 2.0 * d / nrm
            out[a, 0] += coef * x
            out[a, 1] += coef * y
    for a in range(s):
        ax = sel_pos[a, 0]
        ay = sel_pos[a, 1]
        for b in range(a + 1, s):
            dx = ax - sel_pos[b, 0]
            dy = ay - sel_pos[b, 1]
            q = dx * dx + dy * dy
            if q < 4.0:
                r = math.sqrt(q)
                if r < min_r:
                    min_r = r
                if r > 0.0:
                    coef = 4.0 * (2.0 - r) / r
                    out[a, 0] -= coef * dx
                    out[a, 1] -= coef * dy
                    out[b, 0] += coef * dx
                    out[b, 1] += coef * dy
    for a in range(s):
        ax = sel_pos[a, 0]
        ay = sel_pos[a, 1]
        for b in range(c):
            dx = ax - comp_pos[b, 0]
            dy = ay - comp_pos[b, 1]
            q = dx * dx + dy * dy
            if q < 4.0:
                r = math.sqrt(q)
                if r < min_r:
                    min_r = r
                if r > 0.0:
                    coef = 2.0 * (2.0 - r) / r
                    out[a, 0] -= coef * dx
                    out[a, 1] -= coef * dy
    return min_r


@njit(cache=True)
def _pairlist_energy(centers, radius, sel, both_i, both_j, one_sel, one_comp):
    total = 0.0
    max_pair = 0.0
    max_cont = 0.0
    for t in range(sel.size):
        x = centers[sel[t], 0]
        y = centers[sel[t], 1]
        d = math.sqrt(x * x + y * y) + 1.0 - radius
        if d > 0.0:
            total += d * d
            if d > max_cont:
                max_cont = d
    for t in range(both_i.size):
        dx = centers[both_i[t], 0] - centers[both_j[t], 0]
        dy = centers[both_i[t], 1] - centers[both_j[t], 1]
        q = dx * dx + dy * dy
        if q < 4.0:
            d = 2.0 - math.sqrt(q)
            total += 2.0 * (d * d)
            if d > max_pair:
                max_pair = d
    for t in range(one_sel.size):
        dx = centers[one_sel[t], 0] - centers[one_comp[t], 0]
        dy = centers[one_sel[t], 1] - centers[one_comp[t], 1]
        q = dx * dx + dy * dy
        if q < 4.0:
            d = 2.0 - math.sqrt(q)
            total += d * d
            if d > max_pair:
                max_pair = d
    return total, max_pair, max_cont


@njit(cache=True)
def _pairlist_gradient(centers, radius, sel, sel_slot, both_i, both_j, one_sel, one_comp, out):
    # sel_slot maps a global circle index to its row in `out` (-1 if frozen).
    min_r = np.inf
    for t in range(sel.size):
        a = sel_slot[sel[t]]
        x = centers[sel[t], 0]
        y = centers[sel[t], 1]
        nrm = math.sqrt(x * x + y * y)
        d = nrm + 1.0 - radius
        if d > 0.0:
            coef = 2.0 * d / nrm
            out[a, 0] += coef * x
            out[a, 1] += coef * y
    for t in range(both_i.size):
        i = both_i[t]
        j = both_j[t]
        dx = centers[i, 0] - centers[j, 0]
        dy = centers[i, 1] - centers[j, 1]
        q = dx * dx + dy * dy
        if q < 4.0:
            r = math.sqrt(q)
            if r < min_r:
                min_r = r
            if r > 0.0:
                coef = 4.0 * (2.0 - r) / r
                a = sel_slot[i]
                b = sel_slot[j]
                out[a, 0] -= coef * dx
                out[a, 1] -= coef * dy
                out[b, 0] += coef * dx
                out[b, 1] += coef * dy
    for t in range(one_sel.size):
        i = one_sel[t]
        j = one_comp[t]
        dx = centers[i, 0] - centers[j, 0]
        dy = centers[i, 1] - centers[j, 1]
        q = dx * dx + dy * dy
        if q < 4.0:
            r = math.sqrt(q)
            if r < min_r:
                min_r = r
            if r > 0.0:
                coef = 2.0 * (2.0 - r) / r
                a = sel_slot[i]
                out[a, 0] -= coef * dx
                out[a, 1] -= coef * dy
    return min_r


# ---------------------------------------------------------------------------
# uniform grid candidate enumeration
# ---------------------------------------------------------------------------


def _build_cells(points: np.ndarray) -> dict:
    cells: dict = {}
    keys = np.floor(points / _CELL).astype(np.int64)
    for idx in range(points.shape[0]):
        cells.setdefault((int(keys[idx, 0]), int(keys[idx, 1])), []).append(idx)
    return cells


_HALF_NEIGHBORHOOD = ((1, -1), (1, 0), (1, 1), (0, 1))


def _grid_pair_candidates(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (i < j) not provably separated by more than 2, sorted."""
    cells = _build_cells(points)
    lo_parts = []
    hi_parts = []
    for (cx, cy), members in cells.items():
        m = np.asarray(members, dtype=np.int64)
        if m.size > 1:
            a, b = np.triu_indices(m.size, k=1)
            lo_parts.append(m[a])
            hi_parts.append(m[b])
        for dx, dy in _HALF_NEIGHBORHOOD:
            other = cells.get((cx + dx, cy + dy))
            if other is None:
                continue
            o = np.asarray(other, dtype=np.int64)
            left = np.repeat(m, o.size)
            right = np.tile(o, m.size)
            lo_parts.append(np.minimum(left, right))
            hi_parts.append(np.maximum(left, right))
    if not lo_parts:
        return _EMPTY_IDX, _EMPTY_IDX
    lo = np.concatenate(lo_parts)
    hi = np.concatenate(hi_parts)
    order = np.lexsort((hi, lo))
    return lo[order], hi[order]


def _grid_cross_candidates(
    sel_pos: np.ndarray,
    sel_idx: np.ndarray,
    comp_cells: dict,
    comp_idx: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Selected-vs-complement candidates, selected-major then complement order."""
    keys = np.floor(sel_pos / _CELL).astype(np.int64)
    sel_parts = []
    comp_parts = []
    for a in range(sel_pos.shape[0]):
        cx = int(keys[a, 0])
        cy = int(keys[a, 1])
        near = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                members = comp_cells.get((cx + dx, cy + dy))
                if members:
                    near.extend(members)
        if near:
            local = np.sort(np.asarray(near, dtype=np.int64))
            comp_parts.append(comp_idx[local])
            sel_parts.append(np.full(local.size, sel_idx[a], dtype=np.int64))
    if not sel_parts:
        return _EMPTY_IDX, _EMPTY_IDX
    return np.concatenate(sel_parts), np.concatenate(comp_parts)


# ---------------------------------------------------------------------------
# evaluator
# ---------------------------------------------------------------------------


class SubsetEvaluator:
    """Energy/gradient engine for one (layout, selection) pair.

    The complement's positions are frozen at construction; ``energy`` and
    ``gradient`` take only the selected circles' centers, which is what the
    line search inside the per-group optimizer hammers on. ``strategy`` picks
    the candidate-pair enumeration ("dense" or "grid"); both produce
    bit-identical results, dense is faster at every size this package targets.
    """

    def __init__(
        self,
        layout,
        selection,
        instance: Instance,
        strategy: Optional[str] = None,
    ) -> None:
        arr = as_layout(layout, instance)
        self.instance = instance
        self.selection = as_selection(selection, instance.n)
        mask = np.zeros(instance.n, dtype=bool)
        mask[self.selection] = True
        self.complement = np.flatnonzero(~mask)
        self._comp_pos = np.ascontiguousarray(arr[self.complement])
        if strategy is None:
            strategy = "dense"
        if strategy not in ("dense", "grid"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.strategy = strategy
        if strategy == "grid":
            self._comp_cells = _build_cells(self._comp_pos)
            self._sel_slot = np.full(instance.n, -1, dtype=np.int64)
            self._sel_slot[self.selection] = np.arange(self.selection.size)

    # -- internals ---------------------------------------------------------

    def _assemble(self, sel_pos: np.ndarray) -> np.ndarray:
        full = np.empty((self.instance.n, 2), dtype=np.float64)
        full[self.selection] = sel_pos
        full[self.complement] = self._comp_pos
        return full

    def _grid_candidates(self, sel_pos):
        lo, hi = _grid_pair_candidates(sel_pos)
        both_i = self.selection[lo]
        both_j = self.selection[hi]
        one_sel, one_comp = _grid_cross_candidates(
            sel_pos, self.selection, self._comp_cells, self.complement
        )
        return both_i, both_j, one_sel, one_comp

    # -- public surface ------------------------------------------------------

    def sel_positions(self, layout) -> np.ndarray:
        return np.ascontiguousarray(np.asarray(layout, dtype=np.float64)[self.selection])

    def energy(self, sel_pos: np.ndarray) -> float:
        stats = self.energy_stats(sel_pos)
        return stats[0]

    def energy_stats(self, sel_pos: np.ndarray) -> tuple[float, float, float]:
        """(energy, max pair depth, max container depth) for the selection."""
        sel_pos = np.ascontiguousarray(sel_pos, dtype=np.float64)
        if self.strategy == "dense":
            return _dense_energy(sel_pos, self._comp_pos, self.instance.R)
        full = self._assemble(sel_pos)
        both_i, both_j, one_sel, one_comp = self._grid_candidates(sel_pos)
        return _pairlist_energy(
            full, self.instance.R, self.selection, both_i, both_j, one_sel, one_comp
        )

    def gradient(self, sel_pos: np.ndarray) -> np.ndarray:
        """Exact gradient of the subset energy at the given selected centers."""
        sel_pos = np.ascontiguousarray(sel_pos, dtype=np.float64)
        out = np.zeros_like(sel_pos)
        min_r = self._gradient_into(sel_pos, out)
        if min_r >= SINGULARITY_DISTANCE:
            return out
        return self._gradient_with_nudge(sel_pos)

    def _gradient_into(self, sel_pos: np.ndarray, out: np.ndarray) -> float:
        if self.strategy == "dense":
            return _dense_gradient(sel_pos, self._comp_pos, self.instance.R, out)
        full = self._assemble(sel_pos)
        both_i, both_j, one_sel, one_comp = self._grid_candidates(sel_pos)
        return _pairlist_gradient(
            full,
            self.instance.R,
            self.selection,
            self._sel_slot,
            both_i,
            both_j,
            one_sel,
            one_comp,
            out,
        )

    def _gradient_with_nudge(self, sel_pos: np.ndarray) -> np.ndarray:
        """Recover from (near-)coincident overlapping centers.

        The overlap direction is undefined at zero separation, so the
        higher-indexed circle of each offending pair is displaced by a tiny
        deterministic amount before the gradient is evaluated. The nudge only
        exists inside this evaluation; callers never see moved circles.
        """
        full = self._assemble(sel_pos)
        n = self.instance.n
        nudged = _nudge_coincident(full, n)
        logger.warning(
            "nudged %d circle(s) with near-coincident overlapping centers", len(nudged)
        )
        probe = SubsetEvaluator(full, self.selection, self.instance, self.strategy)
        sel_pos2 = np.ascontiguousarray(full[self.selection])
        out = np.zeros_like(sel_pos2)
        min_r = probe._gradient_into(sel_pos2, out)
        if min_r < SINGULARITY_DISTANCE:
            raise SingularOverlapError(
                "overlapping circles remain coincident after nudging"
            )
        return out


def _nudge_coincident(full: np.ndarray, n: int) -> list[int]:
    """Displace the higher-indexed circle of every near-coincident pair in place."""
    moved: list[int] = []
    # Offenders are vanishingly rare, so a plain quadratic scan is fine here.
    for i in range(n):
        for j in range(i + 1, n):
            dx = full[i, 0] - full[j, 0]
            dy = full[i, 1] - full[j, 1]
            if dx * dx + dy * dy < SINGULARITY_DISTANCE * SINGULARITY_DISTANCE:
                if j not in moved:
                    angle = 2.0 * math.pi * (j + 1) / n
                    full[j, 0] += SINGULARITY_NUDGE * math.cos(angle)
                    full[j, 1] += SINGULARITY_NUDGE * math.sin(angle)
                    moved.append(j)
    return moved


# ---------------------------------------------------------------------------
# one-shot evaluations
# ---------------------------------------------------------------------------


def _default_strategy(n: int) -> str:
    return "dense" if n <= ALL_PAIRS_MAX_N else "grid"


def subset_energy(layout, selection, instance: Instance, strategy: Optional[str] = None) -> float:
    """Energy of the layout restricted to the selected circles.

    Each selected circle contributes its container term plus one term per
    overlapping partner, so pairs inside the selection count twice while
    pairs reaching outside count once.
    """
    ev = SubsetEvaluator(layout, selection, instance, strategy or _default_strategy(instance.n))
    return ev.energy(ev.sel_positions(layout))


def subset_gradient(
    layout, selection, instance: Instance, strategy: Optional[str] = None
) -> np.ndarray:
    """Gradient of :func:`subset_energy` with respect to the selected centers.

    Returns one (d/dx, d/dy) row per selected circle, in selection order;
    complement circles are held fixed.
    """
    ev = SubsetEvaluator(layout, selection, instance, strategy or _default_strategy(instance.n))
    return ev.gradient(ev.sel_positions(layout))


def total_energy(layout, instance: Instance, strategy: Optional[str] = None) -> EnergyReport:
    """Full-layout energy report: energy, worst overlaps, gradient norm."""
    arr = as_layout(layout, instance)
    everything = np.arange(instance.n)
    ev = SubsetEvaluator(arr, everything, instance, strategy or _default_strategy(instance.n))
    energy, max_pair, max_cont = ev.energy_stats(arr)
    grad = ev.gradient(arr)
    return EnergyReport(
        total_energy=energy,
        max_pair_overlap=max_pair,
        max_container_overlap=max_cont,
        gradient_norm=float(np.linalg.norm(grad)),
    )
