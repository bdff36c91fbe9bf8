"""Gradient-based minimization of a supplied energy/gradient pair.

Two modes: fixed-step descent s <- s - eta grad E(s), and descent with
Armijo backtracking (the default). Stopping uses the infinity norm on
both the gradient and the step change; whichever is satisfied first
wins. A separate explicit-Euler integrator follows the continuous-time
gradient flow ds/dt = -grad E(s, t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import FrameVector, dot
from .errors import NumericsError, ParamError

EnergyFn = Callable[[FrameVector], float]
GradFn = Callable[[FrameVector], FrameVector]

# below this trial step the line search gives up and reports a zero step
_MIN_STEP = 1e-20


@dataclass(frozen=True)
class OptimizerSettings:
    """Step-size, tolerance, and line-search knobs for :func:`minimize`."""

    step_size: float = 1.0
    tol: float = 1e-5
    max_iters: int = 500
    line_search: bool = True
    backtrack_factor: float = 0.5
    armijo_c: float = 1e-4

    def __post_init__(self):
        if self.step_size <= 0:
            raise ParamError(f"step_size must be > 0, got {self.step_size}")
        if self.tol <= 0:
            raise ParamError(f"tol must be > 0, got {self.tol}")
        if self.max_iters < 1:
            raise ParamError(f"max_iters must be >= 1, got {self.max_iters}")
        if not (0.0 < self.backtrack_factor < 1.0):
            raise ParamError(f"backtrack_factor must be in (0, 1), got {self.backtrack_factor}")
        if not (0.0 < self.armijo_c < 1.0):
            raise ParamError(f"armijo_c must be in (0, 1), got {self.armijo_c}")


@dataclass
class MinimizeResult:
    x_star: FrameVector
    iterations: int
    converged: bool
    energy_trace: np.ndarray
    final_grad_norm: float


def _require_finite_energy(value: float, iteration: int) -> float:
    if not math.isfinite(value):
        raise NumericsError("non-finite energy", iteration=iteration)
    return value


def minimize(
    energy_fn: EnergyFn,
    grad_fn: GradFn,
    x0: FrameVector,
    settings: OptimizerSettings = OptimizerSettings(),
) -> MinimizeResult:
    """Descend energy_fn from x0 until the gradient or step change is small.

    With line search on, each iteration backtracks from ``step_size``
    until the Armijo condition E(x - a g) <= E(x) - c a ||g||^2 holds,
    which makes the energy trace non-increasing. Non-finite energies at
    *trial* points just shrink the step; a non-finite accepted energy or
    gradient raises :class:`NumericsError` with the iteration index.
    """
    x = np.array(x0, dtype=np.float64)
    energy = _require_finite_energy(float(energy_fn(x)), 0)
    trace = [energy]
    converged = False
    iterations = 0

    for it in range(1, settings.max_iters + 1):
        g = np.asarray(grad_fn(x), dtype=np.float64)
        if not np.all(np.isfinite(g)):
            raise NumericsError("non-finite gradient", iteration=it)
        grad_norm = float(np.max(np.abs(g)))
        if grad_norm <= settings.tol:
            converged = True
            break

        if settings.line_search:
            g_sq = dot(g, g)
            alpha = settings.step_size
            while True:
                x_new = x - alpha * g
                e_new = float(energy_fn(x_new))
                if math.isfinite(e_new) and e_new <= energy - settings.armijo_c * alpha * g_sq:
                    break
                alpha *= settings.backtrack_factor
                if alpha < _MIN_STEP:
                    # no acceptable decrease (kink or flat); report a zero step
                    x_new, e_new = x, energy
                    break
        else:
            x_new = x - settings.step_size * g
            e_new = _require_finite_energy(float(energy_fn(x_new)), it)

        step_norm = float(np.max(np.abs(x_new - x)))
        x, energy = x_new, e_new
        iterations = it
        trace.append(energy)
        if step_norm <= settings.tol:
            converged = True
            break

    final_g = np.asarray(grad_fn(x), dtype=np.float64)
    final_grad_norm = float(np.max(np.abs(final_g))) if np.all(np.isfinite(final_g)) else math.inf
    return MinimizeResult(
        x_star=x,
        iterations=iterations,
        converged=converged,
        energy_trace=np.array(trace),
        final_grad_norm=final_grad_norm,
    )


def gradient_flow(
    grad_fn: Callable[[FrameVector, float], FrameVector],
    x0: FrameVector,
    t0: float,
    t1: float,
    dt: float,
) -> list[tuple[float, FrameVector]]:
    """Explicit-Euler integration of ds/dt = -grad E(s, t) from t0 to t1.

    Returns the sampled trajectory [(t0, x0), ..., (t1, x_final)]. The
    state moves on a single smoothly evolving surface, so there are no
    inter-surface jumps; the last step is shortened to land exactly on t1.
    """
    if dt <= 0:
        raise ParamError(f"dt must be > 0, got {dt}")
    if t1 <= t0:
        raise ParamError(f"t1 must exceed t0, got [{t0}, {t1}]")
    x = np.array(x0, dtype=np.float64)
    t = float(t0)
    trajectory = [(t, x.copy())]
    while t < t1 - 1e-12:
        h = min(dt, t1 - t)
        g = np.asarray(grad_fn(x, t), dtype=np.float64)
        x = x - h * g
        if not np.all(np.isfinite(x)):
            raise NumericsError("non-finite state during flow", iteration=len(trajectory))
        t = t + h
        trajectory.append((t, x.copy()))
    return trajectory
