"""Gaussian temporal kernel and its normalized and delta-limit weight forms.

The kernel couples the current time step m to stored-pattern index k:

    K(m, k) = exp(-(m - k)^2 / (2 sigma^2))

Normalized weights divide by the sum over all N indices, so they form a
probability distribution centered at k = m. As sigma -> 0 the normalized
weights collapse to a one-hot vector at round(m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParamError


@dataclass(frozen=True)
class KernelWeights:
    """Length-N nonnegative weight vector together with its center time m."""

    weights: np.ndarray
    m: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.weights.shape[0]


def raw_kernel(m: float, k: float, sigma: float) -> float:
    """Unnormalized Gaussian kernel value K(m, k); 1 iff k = m."""
    if sigma <= 0:
        raise ParamError(f"sigma must be > 0, got {sigma}")
    return math.exp(-((m - k) ** 2) / (2.0 * sigma * sigma))


def _raw_weights(m: float, n: int, sigma: float) -> np.ndarray:
    ks = np.arange(n, dtype=np.float64)
    # weights below the smallest positive normal underflow to 0; that is the
    # intended delta-limit behavior, normalization divides by the true sum
    return np.exp(-((m - ks) ** 2) / (2.0 * sigma * sigma))


def normalized_weights(m: float, n: int, sigma: float) -> KernelWeights:
    """Gaussian weights centered at m, normalized to sum to 1 over k = 0..N-1.

    Fractional m is accepted (continuous-time mode needs real-valued
    centers); m must stay inside [0, N-1].
    """
    if sigma <= 0:
        raise ParamError(f"sigma must be > 0, got {sigma}")
    if n < 1:
        raise ParamError(f"N must be >= 1, got {n}")
    if not (0 <= m <= n - 1):
        raise ParamError(f"m={m} outside [0, {n - 1}]")
    raw = _raw_weights(m, n, sigma)
    total = float(np.einsum("k->", raw))
    return KernelWeights(raw / total, m=float(m))


def delta_weights(m: int, n: int) -> KernelWeights:
    """One-hot weight vector: the sigma -> 0 limit of the Gaussian kernel."""
    if int(m) != m:
        raise ParamError(f"delta weights require integer m, got {m}")
    m = int(m)
    if not (0 <= m <= n - 1):
        raise IndexError(f"m={m} outside [0, {n - 1}]")
    w = np.zeros(n, dtype=np.float64)
    w[m] = 1.0
    return KernelWeights(w, m=float(m))
