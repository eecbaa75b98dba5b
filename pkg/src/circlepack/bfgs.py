"""Per-group quasi-Newton descent of the subset energy.

A selected group of circles is optimized while the rest of the layout stays
frozen: classic BFGS on the group's energy, with an exact line search
(doubling bracket, then golden section) along each search direction. The run
stops when the group energy falls to the feasibility threshold, the gradient
norm collapses, or an iteration cap is hit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from circlepack.energy import Instance, SubsetEvaluator, as_layout

# Stop thresholds for one descent run.
ENERGY_STOP = 1e-20
GRADIENT_STOP = 1e-10

# Curvature safeguard: skip inverse-Hessian updates when u.v is not safely
# positive relative to |u||v|.
CURVATURE_RTOL = 1e-12

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

# The first bracket probe must displace coordinates by at least this fraction
# of their scale; smaller trial steps fall below float resolution and return
# pure rounding noise instead of a slope.
_DISPLACEMENT_FLOOR = 1e-12

# Rounding a coordinate to the grid of representable floats perturbs the
# energy by roughly 2 * sum(depths) * ulp; rises smaller than this estimate
# are indistinguishable from noise and must not stop bracket expansion.
_NOISE_SAFETY = 64.0
_EPS = 2.2e-16


def _evaluation_noise(f0: float, group_len: int, coordinate_scale: float) -> float:
    return _NOISE_SAFETY * math.sqrt(max(f0, 0.0) * group_len) * max(1.0, coordinate_scale) * _EPS


class NotADescentDirectionError(ValueError):
    """Line search was handed a direction with non-negative slope."""


@dataclass(frozen=True)
class LineSearchSpec:
    """Bracketing and termination parameters for the exact line search."""

    alpha_max: float = 1e6
    epsilon: float = 1e-8
    max_expansions: int = 64

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.alpha_max < self.epsilon:
            raise ValueError("alpha_max must be at least epsilon")
        if self.max_expansions < 1:
            raise ValueError("max_expansions must be at least 1")


@dataclass
class BfgsState:
    """Inverse-Hessian approximation plus current gradient and step count."""

    H: np.ndarray
    g: np.ndarray
    iteration: int = 0


@dataclass(frozen=True)
class LocalBfgsResult:
    """Outcome of one per-group descent.

    ``layout`` is the full layout with the selected rows updated; circles
    outside the selection are bit-identical to the input. ``energy_trace``
    logs the group energy at entry and after every accepted step.
    """

    layout: np.ndarray
    final_energy: float
    final_gradient_norm: float
    iterations_used: int
    stop_reason: str
    energy_trace: tuple


def _bracket(
    phi: Callable[[float], float], f0: float, spec: LineSearchSpec, start: float, noise: float
):
    """Expand [0, alpha_max] by doubling until phi turns upward.

    Values within the evaluation noise of each other carry no information
    (steps near the float resolution of the positions evaluate to rounding
    jitter), so expansion only stops on a rise clearly above the noise, on
    an exact zero (the global minimum of a non-negative energy), or at the
    bracketing bound.
    """
    a = 0.0
    b = start
    fb = phi(b)
    if fb > f0 + noise:
        return 0.0, b
    for _ in range(spec.max_expansions):
        if b >= spec.alpha_max or fb == 0.0:
            break
        c = min(2.0 * b, spec.alpha_max)
        fc = phi(c)
        if fc > fb + noise:
            return a, c
        a = b
        b, fb = c, fc
    return a, b


def _golden(phi: Callable[[float], float], lo: float, hi: float, eps: float) -> float:
    h = hi - lo
    if h <= eps:
        return 0.5 * (lo + hi)
    steps = int(math.ceil(math.log(eps / h) / math.log(_INVPHI)))
    c = hi - _INVPHI * h
    d = lo + _INVPHI * h
    fc = phi(c)
    fd = phi(d)
    for _ in range(steps):
        # <= ties shrink from the right, so plateaus resolve to their left
        # edge (first tangency rather than an arbitrary overshoot)
        if fc <= fd:
            hi = d
            d, fd = c, fc
            h = hi - lo
            c = hi - _INVPHI * h
            fc = phi(c)
        else:
            lo = c
            c, fc = d, fd
            h = hi - lo
            d = lo + _INVPHI * h
            fd = phi(d)
    return 0.5 * (lo + hi)


def _minimize_along(
    phi: Callable[[float], float],
    f0: float,
    spec: LineSearchSpec,
    direction_norm: float,
    coordinate_scale: float,
    group_len: int,
) -> float:
    start = spec.epsilon
    if direction_norm > 0.0:
        floor = _DISPLACEMENT_FLOOR * max(1.0, coordinate_scale) / direction_norm
        if floor > start:
            start = min(floor, spec.alpha_max)
    noise = _evaluation_noise(f0, group_len, coordinate_scale)
    lo, hi = _bracket(phi, f0, spec, start, noise)
    return _golden(phi, lo, hi, spec.epsilon)


def line_search(
    layout,
    selection,
    instance: Instance,
    direction,
    spec: Optional[LineSearchSpec] = None,
) -> float:
    """Step length approximately minimizing the group energy along ``direction``.

    The step applied is ``x + alpha * direction``; the direction must have a
    negative slope against the current gradient or
    :class:`NotADescentDirectionError` is raised so the caller can restart
    from steepest descent.
    """
    arr = as_layout(layout, instance)
    ev = SubsetEvaluator(arr, selection, instance)
    x0 = ev.sel_positions(arr)
    d = np.asarray(direction, dtype=np.float64).ravel()
    if d.size != 2 * x0.shape[0]:
        raise ValueError(f"direction must have length {2 * x0.shape[0]}, got {d.size}")
    g = ev.gradient(x0).ravel()
    slope = float(g @ d)
    if not slope < 0.0:
        raise NotADescentDirectionError(f"directional derivative is {slope}, not negative")
    step = d.reshape(-1, 2)
    return _minimize_along(
        lambda a: ev.energy(x0 + a * step),
        ev.energy(x0),
        spec or LineSearchSpec(),
        float(np.linalg.norm(d)),
        float(np.max(np.abs(x0))) if x0.size else 1.0,
        x0.shape[0],
    )


def _updated_inverse_hessian(H: np.ndarray, u: np.ndarray, v: np.ndarray):
    """One BFGS inverse-Hessian update, or None when the safeguard skips it."""
    uv = float(u @ v)
    if uv <= CURVATURE_RTOL * float(np.linalg.norm(u)) * float(np.linalg.norm(v)):
        return None
    rho = 1.0 / uv
    Hv = H @ v
    K = rho * np.outer(u, Hv)
    # K + K.T is elementwise symmetric, which keeps H bitwise symmetric.
    return (H - (K + K.T)) + (rho + rho * rho * float(v @ Hv)) * np.outer(u, u)


def bfgs_update(state: BfgsState, u, v) -> BfgsState:
    """Apply the curvature-safeguarded inverse-Hessian update to ``state``."""
    u = np.asarray(u, dtype=np.float64).ravel()
    v = np.asarray(v, dtype=np.float64).ravel()
    if u.shape != v.shape or u.size != state.H.shape[0]:
        raise ValueError("u and v must match the state dimension")
    H_new = _updated_inverse_hessian(state.H, u, v)
    if H_new is None:
        return state
    return BfgsState(H=H_new, g=state.g, iteration=state.iteration)


def local_bfgs(
    layout,
    selection,
    instance: Instance,
    max_iter: int = 1000,
    line_search_spec: Optional[LineSearchSpec] = None,
    strategy: Optional[str] = None,
) -> LocalBfgsResult:
    """Minimize the selected circles' energy with the complement frozen."""
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    arr = as_layout(layout, instance)
    ev = SubsetEvaluator(arr, selection, instance, strategy)
    spec = line_search_spec or LineSearchSpec()

    x = ev.sel_positions(arr)
    f = ev.energy(x)
    g = ev.gradient(x).ravel()
    gnorm = float(np.linalg.norm(g))
    trace = [f]
    iterations = 0
    stop = "max_iterations"

    if f <= ENERGY_STOP:
        stop = "energy_threshold"
    elif gnorm <= GRADIENT_STOP:
        stop = "gradient_threshold"
    else:
        dim = 2 * x.shape[0]
        H = np.eye(dim)
        for k in range(max_iter):
            d = -(H @ g)
            slope = float(g @ d)
            if slope >= 0.0:
                # stale curvature made H*g useless; restart from steepest descent
                H = np.eye(dim)
                d = -g
                slope = -float(g @ g)
            step = d.reshape(-1, 2)
            alpha = _minimize_along(
                lambda a: ev.energy(x + a * step),
                f,
                spec,
                float(np.linalg.norm(d)),
                float(np.max(np.abs(x))),
                x.shape[0],
            )
            x_new = x + alpha * step
            f_new = ev.energy(x_new)
            halvings = 0
            while f_new > f and halvings < 64:
                alpha *= 0.5
                x_new = x + alpha * step
                f_new = ev.energy(x_new)
                halvings += 1
            if f_new > f:
                break  # no numeric progress along a descent direction
            if f_new == f and np.array_equal(x_new, x):
                break  # step shrank below float resolution: nothing changed
            iterations = k + 1
            g_new = ev.gradient(x_new).ravel()
            gnorm = float(np.linalg.norm(g_new))
            trace.append(f_new)
            if f_new <= ENERGY_STOP:
                x, f = x_new, f_new
                stop = "energy_threshold"
                break
            if gnorm <= GRADIENT_STOP:
                x, f = x_new, f_new
                stop = "gradient_threshold"
                break
            H_next = _updated_inverse_hessian(H, (x_new - x).ravel(), g_new - g)
            if H_next is not None:
                H = H_next
            x, f, g = x_new, f_new, g_new

    out = arr.copy()
    out[ev.selection] = x
    return LocalBfgsResult(
        layout=out,
        final_energy=f,
        final_gradient_norm=gnorm,
        iterations_used=iterations,
        stop_reason=stop,
        energy_trace=tuple(trace),
    )
