"""Vector primitives, the stored-pattern container, and model hyperparameters.

All arithmetic is 64-bit; reductions (dot products, weight sums) go through
``np.einsum`` with a fixed sequential contraction order, so results are
bit-identical across runs and worker counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParamError, ZeroNormError

# A frame is a plain 1-D float64 array of length d.
FrameVector = np.ndarray


def as_frame(values) -> FrameVector:
    """Coerce ``values`` to a finite 1-D float64 vector."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionError(f"expected a 1-D vector, got shape {v.shape}")
    if v.size == 0:
        raise DimensionError("vector must have d >= 1")
    if not np.all(np.isfinite(v)):
        raise ParamError("vector contains NaN or Inf")
    return v


def dot(a: FrameVector, b: FrameVector) -> float:
    """Inner product <a, b> with a deterministic reduction order."""
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.einsum("i,i->", a, b))


def batch_dot(patterns: np.ndarray, s: FrameVector) -> np.ndarray:
    """Inner product of ``s`` against every row of ``patterns``.

    Uses the same sequential einsum reduction as :func:`dot`; never
    dispatches to a threaded BLAS kernel.
    """
    if patterns.shape[1] != s.shape[0]:
        raise DimensionError(
            f"dimension mismatch: patterns d={patterns.shape[1]}, state d={s.shape[0]}"
        )
    return np.einsum("kd,d->k", patterns, s)


def norm_sq(v: FrameVector) -> float:
    """Squared Euclidean norm ||v||^2."""
    return dot(v, v)


def normalize_frame(v: FrameVector) -> FrameVector:
    """Rescale ``v`` so that ||result||^2 = d.

    Raises :class:`ZeroNormError` for the zero vector, which has no
    direction to preserve.
    """
    v = as_frame(v)
    nrm = math.sqrt(norm_sq(v))
    if nrm == 0.0:
        raise ZeroNormError("cannot normalize the zero vector")
    return v * (math.sqrt(v.size) / nrm)


class PatternStore:
    """Ordered, immutable collection of stored patterns sharing one dimension.

    Row k of ``patterns`` is the pattern with time index k. When
    ``normalized`` is true every row satisfies ||row||^2 = d within a
    1e-9 relative tolerance; this is validated at construction.
    """

    __slots__ = ("_patterns", "normalized")

    def __init__(self, patterns, normalized: bool = False):
        arr = np.array(patterns, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise DimensionError(f"expected an (N, d) array with N, d >= 1, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ParamError("stored patterns contain NaN or Inf")
        if normalized:
            sq = np.einsum("kd,kd->k", arr, arr)
            d = arr.shape[1]
            if not np.all(np.abs(sq - d) <= 1e-9 * d):
                raise ParamError("store marked normalized but some ||pattern||^2 != d")
        arr.setflags(write=False)
        self._patterns = arr
        self.normalized = normalized

    @classmethod
    def from_frames(cls, frames, normalize: bool = True) -> "PatternStore":
        """Stack 1-D frames into a store, normalizing each row by default."""
        rows = [as_frame(f) for f in frames]
        if not rows:
            raise DimensionError("a store requires at least one pattern")
        d = rows[0].size
        for i, r in enumerate(rows):
            if r.size != d:
                raise DimensionError(f"pattern {i} has d={r.size}, expected {d}")
        if normalize:
            rows = [normalize_frame(r) for r in rows]
        return cls(np.stack(rows), normalized=normalize)

    @property
    def patterns(self) -> np.ndarray:
        return self._patterns

    @property
    def n(self) -> int:
        return self._patterns.shape[0]

    @property
    def d(self) -> int:
        return self._patterns.shape[1]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, k: int) -> FrameVector:
        return self._patterns[k]

    def __repr__(self) -> str:
        return f"PatternStore(n={self.n}, d={self.d}, normalized={self.normalized})"


@dataclass(frozen=True)
class ModelParams:
    """Scalar hyperparameters of the frame-retrieval energy.

    beta      sharpness of the log-sum-exp attention term (> 0)
    lam       quadratic regularization weight (>= 0)
    lambda_f  fidelity weight anchoring the state to the target frame (>= 0)
    mu        continuity weight toward the previously retrieved frame (>= 0)
    sigma     width of the Gaussian temporal kernel (> 0)
    """

    beta: float
    lam: float
    lambda_f: float
    mu: float
    sigma: float

    def __post_init__(self):
        for name in ("beta", "lam", "lambda_f", "mu", "sigma"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParamError(f"{name} must be finite, got {value}")
        if self.beta <= 0:
            raise ParamError(f"beta must be > 0, got {self.beta}")
        if self.sigma <= 0:
            raise ParamError(f"sigma must be > 0, got {self.sigma}")
        for name in ("lam", "lambda_f", "mu"):
            if getattr(self, name) < 0:
                raise ParamError(f"{name} must be >= 0, got {getattr(self, name)}")
