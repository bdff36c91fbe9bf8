"""Energy functionals and their analytic gradients.

Four related surfaces over the state s, all built from the inner products
<s, s^(k)> against the stored patterns:

  general_energy      kernel-weighted EXP or LSE functional plus
                      (lam/2)||s||^2 regularization
  movie_energy        full frame-retrieval functional:
                      (lam/2)||s||^2 + lambda_f ||s - s^(m)||^2
                      + mu ||s - s^(m-1)||^2
                      - (1/beta) log(sum_k w_k(m) e^{beta <s, s^(k)>})
                      - max_k <s, s^(k)>
  simplified_energy   movie_energy without the fidelity/continuity terms
  continuous_energy   simplified form with the weight sum replaced by a
                      trapezoid quadrature over a real-valued time axis

Every exp/log-sum here shifts by the maximum score before exponentiation.
Scores beta <s, s^(k)> reach beta*d, which overflows any float format at
realistic frame dimensions, so the shift is mandatory. The EXP functional
value itself is exponential in beta*d and therefore only usable at small
beta*d; :func:`log_weighted_exp_sum` is the log-domain form that stays
finite everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .core import FrameVector, PatternStore, ModelParams, batch_dot, dot, norm_sq
from .errors import DegenerateWeightsError, DimensionError, ParamError
from .kernel import KernelWeights, normalized_weights

FunctionalTag = Literal["exp", "lse"]


@dataclass(frozen=True)
class EnergyBreakdown:
    """Term-by-term decomposition of the frame-retrieval energy."""

    regularization: float
    fidelity: float
    continuity: float
    lse: float
    max_term: float
    total: float


@dataclass(frozen=True)
class SoftmaxProbs:
    """Weighted softmax p_k over stored patterns and the index of its peak."""

    p: np.ndarray
    argmax_index: int


def _log_weights(weights: np.ndarray) -> np.ndarray:
    """log of nonnegative weights with zeros mapped to -inf, no warnings."""
    out = np.full(weights.shape, -np.inf)
    nz = weights > 0.0
    out[nz] = np.log(weights[nz])
    return out


def _scores(s: FrameVector, store: PatternStore, weights: np.ndarray, beta: float) -> np.ndarray:
    """Shifted-log scores log(w_k) + beta <s, s^(k)>."""
    if len(weights) != store.n:
        raise DimensionError(f"got {len(weights)} weights for {store.n} patterns")
    return _log_weights(weights) + beta * batch_dot(store.patterns, s)


def log_weighted_exp_sum(
    s: FrameVector, store: PatternStore, weights: KernelWeights, beta: float
) -> float:
    """log(sum_k w_k exp(beta <s, s^(k)>)) via max-shift, finite for any beta*d."""
    scores = _scores(s, store, weights.weights, beta)
    shift = float(np.max(scores))
    if not math.isfinite(shift):
        raise DegenerateWeightsError("all kernel weights are zero")
    return shift + math.log(float(np.einsum("k->", np.exp(scores - shift))))


def general_energy(
    s: FrameVector,
    store: PatternStore,
    weights: KernelWeights,
    functional: FunctionalTag,
    beta: float,
    lam: float,
) -> float:
    """Kernel-weighted energy with an exponential or log-sum-exp functional.

    exp:  - sum_k w_k exp(beta <s, s^(k)>) + (lam/2) ||s||^2
    lse:  - (1/beta) log(sum_k w_k exp(beta <s, s^(k)>)) + (lam/2) ||s||^2

    The exp form overflows to -inf once beta <s, s^(k)> exceeds float
    range; use the lse form (or :func:`log_weighted_exp_sum`) at scale.
    """
    if beta <= 0:
        raise ParamError(f"beta must be > 0, got {beta}")
    reg = 0.5 * lam * norm_sq(s)
    lws = log_weighted_exp_sum(s, store, weights, beta)
    if functional == "lse":
        return -lws / beta + reg
    if functional == "exp":
        return -math.exp(lws) + reg
    raise ParamError(f"unknown functional tag {functional!r}")


def exp_gradient(
    s: FrameVector,
    store: PatternStore,
    weights: KernelWeights,
    beta: float,
    lam: float,
) -> FrameVector:
    """Gradient of the exp-functional energy.

    -beta sum_k w_k exp(beta <s, s^(k)>) s^(k) + lam s
    """
    scores = _scores(s, store, weights.weights, beta)
    coeff = np.exp(scores)
    return -beta * np.einsum("k,kd->d", coeff, store.patterns) + lam * s


def softmax_pk(
    s: FrameVector, store: PatternStore, weights: KernelWeights, beta: float
) -> SoftmaxProbs:
    """Weighted softmax p_k = w_k e^{beta <s, s^(k)>} / sum_j w_j e^{beta <s, s^(j)>}."""
    scores = _scores(s, store, weights.weights, beta)
    shift = float(np.max(scores))
    if not math.isfinite(shift):
        raise DegenerateWeightsError("all kernel weights are zero")
    p = np.exp(scores - shift)
    p /= float(np.einsum("k->", p))
    return SoftmaxProbs(p=p, argmax_index=int(np.argmax(p)))


def _check_time_index(m, n: int) -> int:
    if m != int(m):
        raise ParamError(f"discrete time index must be an integer, got {m}")
    m = int(m)
    if not (0 <= m <= n - 1):
        raise ParamError(f"m={m} outside [0, {n - 1}]")
    return m


def _resolve_prev(prev: FrameVector | None, d: int) -> FrameVector:
    if prev is None:
        return np.zeros(d)
    if prev.shape != (d,):
        raise DimensionError(f"prev has shape {prev.shape}, expected ({d},)")
    return prev


def movie_energy(
    s: FrameVector,
    m: int,
    store: PatternStore,
    params: ModelParams,
    prev: FrameVector | None = None,
    weights: KernelWeights | None = None,
) -> EnergyBreakdown:
    """Full frame-retrieval energy at step m, broken down by term.

    ``prev`` is the previously retrieved frame; for m = 0 it is the zero
    vector, which merges the continuity term into the regularization.
    ``weights`` overrides the Gaussian weights (e.g. with a one-hot
    vector for the delta limit); by default they are recomputed from
    ``params.sigma``.
    """
    m = _check_time_index(m, store.n)
    prev = _resolve_prev(prev, store.d)
    if weights is None:
        weights = normalized_weights(m, store.n, params.sigma)
    dots = batch_dot(store.patterns, s)

    reg = 0.5 * params.lam * norm_sq(s)
    diff_m = s - store[m]
    fid = params.lambda_f * dot(diff_m, diff_m)
    diff_p = s - prev
    cont = params.mu * dot(diff_p, diff_p)
    lse = -log_weighted_exp_sum(s, store, weights, params.beta) / params.beta
    max_term = -float(np.max(dots))
    return EnergyBreakdown(
        regularization=reg,
        fidelity=fid,
        continuity=cont,
        lse=lse,
        max_term=max_term,
        total=reg + fid + cont + lse + max_term,
    )


def movie_gradient(
    s: FrameVector,
    m: int,
    store: PatternStore,
    params: ModelParams,
    prev: FrameVector | None = None,
    weights: KernelWeights | None = None,
) -> FrameVector:
    """Analytic gradient of :func:`movie_energy`.

    lam s + 2 lambda_f (s - s^(m)) + 2 mu (s - s^(m-1))
      - sum_k p_k(m) s^(k) - s^(argmax_k <s, s^(k)>)

    The max term is non-differentiable where the argmax ties; ties break
    to the smallest index.
    """
    m = _check_time_index(m, store.n)
    prev = _resolve_prev(prev, store.d)
    if weights is None:
        weights = normalized_weights(m, store.n, params.sigma)
    probs = softmax_pk(s, store, weights, params.beta)
    dots = batch_dot(store.patterns, s)
    am = int(np.argmax(dots))
    return (
        params.lam * s
        + 2.0 * params.lambda_f * (s - store[m])
        + 2.0 * params.mu * (s - prev)
        - np.einsum("k,kd->d", probs.p, store.patterns)
        - store[am]
    )


def simplified_energy(
    s: FrameVector,
    t: float,
    store: PatternStore,
    beta: float,
    lam: float,
    sigma: float,
    weights: KernelWeights | None = None,
) -> float:
    """Frame-retrieval energy without the fidelity and continuity terms.

    Accepts fractional t: the Gaussian weights are centered wherever t
    falls, which is what the landscape-over-time analysis samples.
    """
    if weights is None:
        weights = normalized_weights(t, store.n, sigma)
    dots = batch_dot(store.patterns, s)
    reg = 0.5 * lam * norm_sq(s)
    lse = -log_weighted_exp_sum(s, store, weights, beta) / beta
    return reg + lse - float(np.max(dots))


def simplified_gradient(
    s: FrameVector,
    t: float,
    store: PatternStore,
    beta: float,
    lam: float,
    sigma: float,
    weights: KernelWeights | None = None,
) -> FrameVector:
    """Analytic gradient of :func:`simplified_energy` (ties to smallest index)."""
    if weights is None:
        weights = normalized_weights(t, store.n, sigma)
    probs = softmax_pk(s, store, weights, beta)
    dots = batch_dot(store.patterns, s)
    am = int(np.argmax(dots))
    return lam * s - np.einsum("k,kd->d", probs.p, store.patterns) - store[am]


def _quadrature_nodes(n: int, step: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Trapezoid nodes over [0, N-1], their coefficients, and pattern indices.

    Patterns exist only at integer times; each node maps to the nearest
    stored index (round-half-even at exact midpoints).
    """
    if step <= 0:
        raise ParamError(f"quadrature step must be > 0, got {step}")
    if n == 1:
        # degenerate interval: a single node carrying unit mass
        return np.zeros(1), np.ones(1), np.zeros(1, dtype=int)
    span = float(n - 1)
    j = round(span / step)
    if j < 1 or abs(j * step - span) > 1e-9 * span:
        raise ParamError(f"quadrature step {step} does not evenly divide the span {span}")
    nodes = np.arange(j + 1, dtype=np.float64) * step
    coeff = np.full(j + 1, step)
    coeff[0] *= 0.5
    coeff[-1] *= 0.5
    idx = np.clip(np.rint(nodes).astype(int), 0, n - 1)
    return nodes, coeff, idx


def continuous_energy(
    s: FrameVector,
    t: float,
    store: PatternStore,
    beta: float,
    lam: float,
    sigma: float,
    quadrature_step: float = 1.0,
) -> float:
    """Continuous-time analog: the weight sum becomes a trapezoid integral.

    Both the weighted exp integral and the kernel normalizer are
    integrated over the same nodes, so at quadrature_step = 1 this
    coincides with :func:`simplified_energy` up to the half-weighted
    endpoint nodes.
    """
    if sigma <= 0:
        raise ParamError(f"sigma must be > 0, got {sigma}")
    if not (0 <= t <= store.n - 1):
        raise ParamError(f"t={t} outside [0, {store.n - 1}]")
    nodes, coeff, idx = _quadrature_nodes(store.n, quadrature_step)
    w = np.exp(-((t - nodes) ** 2) / (2.0 * sigma * sigma))
    dots = batch_dot(store.patterns, s)

    log_cw = _log_weights(coeff * w)
    num_scores = log_cw + beta * dots[idx]
    shift = float(np.max(num_scores))
    if not math.isfinite(shift):
        raise DegenerateWeightsError("all quadrature weights are zero")
    num_log = shift + math.log(float(np.einsum("j->", np.exp(num_scores - shift))))
    den_shift = float(np.max(log_cw))
    den_log = den_shift + math.log(float(np.einsum("j->", np.exp(log_cw - den_shift))))

    reg = 0.5 * lam * norm_sq(s)
    max_term = -float(np.max(dots[idx]))
    return reg - (num_log - den_log) / beta + max_term


def continuous_gradient(
    s: FrameVector,
    t: float,
    store: PatternStore,
    beta: float,
    lam: float,
    sigma: float,
    quadrature_step: float = 1.0,
) -> FrameVector:
    """Analytic gradient of :func:`continuous_energy` at fixed t."""
    if sigma <= 0:
        raise ParamError(f"sigma must be > 0, got {sigma}")
    nodes, coeff, idx = _quadrature_nodes(store.n, quadrature_step)
    w = np.exp(-((t - nodes) ** 2) / (2.0 * sigma * sigma))
    dots = batch_dot(store.patterns, s)

    scores = _log_weights(coeff * w) + beta * dots[idx]
    shift = float(np.max(scores))
    if not math.isfinite(shift):
        raise DegenerateWeightsError("all quadrature weights are zero")
    q = np.exp(scores - shift)
    q /= float(np.einsum("j->", q))

    node_dots = dots[idx]
    am_node = int(np.argmax(node_dots))
    return (
        lam * s
        - np.einsum("j,jd->d", q, store.patterns[idx])
        - store[int(idx[am_node])]
    )
