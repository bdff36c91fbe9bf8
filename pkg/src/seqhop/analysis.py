"""Stability-condition and energy-landscape analysis tools.

Two families:

* The global-minimum condition in the delta-weight limit: the target
  frame is the global minimizer at step m whenever lambda_f > G(lambda_f),
  with

      G(lambda_f) = (2 lambda_f + 2)^2 (lam/2 + lambda_f) / (lam + 2 lambda_f)^p

  The denominator exponent p is selectable between 2 and 3; both forms
  are in circulation and they disagree, so shipping both keeps the
  discrepancy testable. The default is 3.

* Two-dimensional landscape sampling: the simplified (no fidelity, no
  continuity) energy evaluated on a grid, per requested time, plus the
  signed energy jump at a fixed state when the surface switches times.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import FrameVector, ModelParams, PatternStore
from .energy import simplified_energy
from .errors import DimensionError, NoCrossingError, ParamError
from .parallel import worker_count

_VARIANTS = (2, 3)


def _check_variant(exponent: int) -> int:
    if exponent not in _VARIANTS:
        raise ParamError(f"condition variant exponent must be 2 or 3, got {exponent}")
    return exponent


def g_of_lambda_f(lambda_f: float, lam: float = 0.0, exponent: int = 3) -> float:
    """G(lambda_f) = (2 lambda_f + 2)^2 (lam/2 + lambda_f) / (lam + 2 lambda_f)^exponent."""
    _check_variant(exponent)
    den = lam + 2.0 * lambda_f
    if den <= 0:
        raise ParamError("lam + 2 lambda_f must be > 0")
    return (2.0 * lambda_f + 2.0) ** 2 * (lam / 2.0 + lambda_f) / den**exponent


def check_condition(lambda_f: float, lam: float = 0.0, exponent: int = 3) -> bool:
    """Whether lambda_f strictly exceeds G(lambda_f)."""
    return lambda_f > g_of_lambda_f(lambda_f, lam, exponent)


def critical_lambda_f(
    lam: float = 0.0,
    exponent: int = 3,
    bracket: tuple[float, float] = (1e-6, 1e6),
    tol: float = 1e-9,
) -> float:
    """Smallest lambda_f > 0 with lambda_f >= G(lambda_f), by bisection.

    Raises :class:`NoCrossingError` when h(x) = x - G(x) has no sign
    change inside the bracket (the exponent-2 form at small lam never
    crosses). The returned value is verified on a sample of points above
    it.
    """
    _check_variant(exponent)
    lo, hi = bracket
    if lo <= 0 or hi <= lo:
        raise ParamError(f"invalid bracket {bracket}")

    def h(x: float) -> float:
        return x - g_of_lambda_f(x, lam, exponent)

    if h(lo) >= 0:
        raise NoCrossingError(f"condition already holds at bracket start {lo}")
    if h(hi) <= 0:
        raise NoCrossingError(f"no crossing of lambda_f = G(lambda_f) inside {bracket}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if h(mid) > 0:
            hi = mid
        else:
            lo = mid
    crossing = 0.5 * (lo + hi)

    for factor in np.geomspace(1.0 + 1e-6, 1e3, 32):
        if not check_condition(crossing * factor, lam, exponent):
            raise NoCrossingError(
                f"condition fails above the crossing at lambda_f={crossing * factor}"
            )
    return crossing


def figure1_data(
    lambdas, lambda_f_grid, exponent: int = 3
) -> list[tuple[float, float, float, float]]:
    """Rows (lam, lambda_f, G, identity) for plotting G against lambda_f.

    The identity column repeats lambda_f so the reference line G = lambda_f
    can be drawn straight from the table.
    """
    _check_variant(exponent)
    rows = []
    for lam in lambdas:
        for lf in lambda_f_grid:
            if lf <= 0:
                raise ParamError(f"lambda_f grid must be > 0, got {lf}")
            rows.append((float(lam), float(lf), g_of_lambda_f(lf, lam, exponent), float(lf)))
    return rows


def write_figure1_csv(rows, path) -> None:
    with open(path, "w") as fh:
        fh.write("lambda,lambda_f,G,identity\n")
        for lam, lf, g, ident in rows:
            fh.write(f"{lam!r},{lf!r},{g!r},{ident!r}\n")


@dataclass(frozen=True)
class GridSpec:
    """Rectangular sampling domain with ``resolution`` nodes per axis."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    resolution: int

    def __post_init__(self):
        if self.x_max <= self.x_min or self.y_max <= self.y_min:
            raise ParamError("grid max must exceed min on both axes")
        if self.resolution < 2:
            raise ParamError(f"resolution must be >= 2, got {self.resolution}")

    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.resolution)

    def ys(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.resolution)


def landscape_grid(
    store: PatternStore,
    beta: float,
    lam: float,
    sigma: float,
    t: float,
    grid: GridSpec,
) -> np.ndarray:
    """Simplified energy sampled on a 2-D grid at time t, row-major over y.

    Entry [i, j] is the energy at (x = xs[j], y = ys[i]). Rows are
    sampled in parallel when SEQHOP_THREADS allows, assembled in index
    order.
    """
    if store.d != 2:
        raise DimensionError(f"landscape sampling requires d=2, got d={store.d}")
    xs, ys = grid.xs(), grid.ys()

    def row(i: int) -> np.ndarray:
        out = np.empty(len(xs))
        for j, x in enumerate(xs):
            out[j] = simplified_energy(np.array([x, ys[i]]), t, store, beta, lam, sigma)
        return out

    workers = worker_count()
    if workers == 1:
        return np.stack([row(i) for i in range(len(ys))])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.stack(list(pool.map(row, range(len(ys)))))


def grid_argmin(energies: np.ndarray, grid: GridSpec) -> tuple[float, float, float]:
    """(x, y, energy) of the smallest sampled value (first in row-major order)."""
    i, j = np.unravel_index(int(np.argmin(energies)), energies.shape)
    return float(grid.xs()[j]), float(grid.ys()[i]), float(energies[i, j])


def nearest_stored(store: PatternStore, point) -> int:
    """Index of the stored vector closest (Euclidean) to ``point``."""
    diffs = store.patterns - np.asarray(point, dtype=np.float64)
    return int(np.argmin(np.einsum("kd,kd->k", diffs, diffs)))


def write_landscape_csv(energies: np.ndarray, grid: GridSpec, t: float, path) -> None:
    xs, ys = grid.xs(), grid.ys()
    with open(path, "w") as fh:
        fh.write(f"# t={t!r}\n")
        fh.write("x,y,energy\n")
        for i in range(len(ys)):
            for j in range(len(xs)):
                fh.write(f"{xs[j]!r},{ys[i]!r},{energies[i, j]!r}\n")


def surface_jump(
    store: PatternStore,
    beta: float,
    lam: float,
    sigma: float,
    s_at: FrameVector,
    t_from: float,
    t_to: float,
) -> float:
    """Signed energy change at a fixed state when the surface switches times."""
    return simplified_energy(s_at, t_to, store, beta, lam, sigma) - simplified_energy(
        s_at, t_from, store, beta, lam, sigma
    )


def delta_e_lower_bound(t: float, d: int, params: ModelParams) -> float:
    """Lower bound on E(s, m) - E(s^(m), m) at radius t = ||s||, delta-weight limit.

    f(t) + lambda_f d + 2 d - lam d / 2 - 2 mu d, with the radial quadratic
    f(t) = (lam/2 + lambda_f) t^2 - (2 lambda_f + 2) sqrt(d) t. The bound is
    minimized at t0 = (2 lambda_f + 2) sqrt(d) / (lam + 2 lambda_f); requiring
    positivity there is what produces the exponent-2 condition with the
    lam/2 - 2 + 2 mu correction terms.
    """
    f = (params.lam / 2.0 + params.lambda_f) * t * t - (
        2.0 * params.lambda_f + 2.0
    ) * math.sqrt(d) * t
    return f + params.lambda_f * d + 2.0 * d - params.lam * d / 2.0 - 2.0 * params.mu * d
