"""Multilinear extension: exact enumeration, sampled marginals, sample sizing."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import RandomStream, all_subset_masks, join_with_indicator, sample_random_sets
from .core import ElementSet
from .functions import MarginalBounds, SubmodularOracle

EXACT_MAX_N = 20
_CHUNK = 1 << 16


class GroundSetTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class EstimatorConfig:
    """Knobs for the sample count of each marginal estimate.

    ``failure_prob`` is the per-estimate failure probability; ``None`` means
    ``1/n^2``, which produces the ``log |E|`` factor.
    """

    epsilon: float
    sample_multiplier: float = 1.0
    sample_cap: int | None = None
    failure_prob: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if not self.sample_multiplier > 0.0:
            raise ValueError("sample_multiplier must be positive")
        if self.sample_cap is not None and self.sample_cap < 1:
            raise ValueError("sample_cap must be a positive integer")
        if self.failure_prob is not None and not 0.0 < self.failure_prob < 1.0:
            raise ValueError("failure_prob must lie in (0, 1)")

    def resolved_failure_prob(self, n: int) -> float:
        if self.failure_prob is not None:
            return self.failure_prob
        return 1.0 / max(n, 2) ** 2


@dataclass(frozen=True)
class MarginalEstimate:
    element: int
    value: float
    samples_used: int


def _check_exact(n: int) -> None:
    if n > EXACT_MAX_N:
        raise GroundSetTooLargeError(f"exact enumeration needs n <= {EXACT_MAX_N}, got n={n}")


def subset_values(f: SubmodularOracle) -> np.ndarray:
    """``f`` on every subset, indexed by bitset code (2^n value calls)."""
    _check_exact(f.n)
    total = 1 << f.n
    if total <= _CHUNK:
        return f.values(all_subset_masks(f.n))
    out = np.empty(total)
    bits = np.arange(f.n, dtype=np.int64)
    for lo in range(0, total, _CHUNK):
        codes = np.arange(lo, lo + _CHUNK, dtype=np.int64)
        out[lo : lo + _CHUNK] = f.values(((codes[:, None] >> bits) & 1).astype(bool))
    return out


def subset_probabilities(y: np.ndarray) -> np.ndarray:
    """Probability of each subset under R(y), indexed by bitset code."""
    p = np.ones(1)
    for yi in np.asarray(y, dtype=np.float64):
        p = np.concatenate([p * (1.0 - yi), p * yi])
    return p


def exact_F(f: SubmodularOracle, y: np.ndarray, values: np.ndarray | None = None) -> float:
    """Multilinear extension by full enumeration.

    Pass ``values`` from :func:`subset_values` to reuse one table across many
    points.
    """
    y = np.asarray(y, dtype=np.float64)
    _check_exact(y.shape[0])
    if values is None:
        values = subset_values(f)
    return float(np.dot(subset_probabilities(y), values))


def exact_marginal(f: SubmodularOracle, y: np.ndarray, e: int, values: np.ndarray | None = None) -> float:
    y = np.asarray(y, dtype=np.float64)
    if values is None:
        values = subset_values(f)
    raised = join_with_indicator(y, ElementSet.from_ids(y.shape[0], [e]))
    return exact_F(f, raised, values) - exact_F(f, y, values)


def sampled_F(f: SubmodularOracle, y: np.ndarray, m: int, stream: RandomStream) -> tuple[float, float]:
    """Monte-Carlo estimate of F(y) with its standard error."""
    vals = f.values(sample_random_sets(y, m, stream))
    stderr = float(vals.std(ddof=1) / math.sqrt(m)) if m > 1 else math.inf
    return float(vals.mean()), stderr


def hoeffding_failure_bound(m: int, beta: float, bounds: MarginalBounds) -> float:
    """Chance that an m-sample estimate misses by more than ``beta * d_upper``."""
    return 2.0 * math.exp(-2.0 * m * beta**2 / bounds.spread**2)


def sample_count(r: int, bounds: MarginalBounds, n: int, cfg: EstimatorConfig) -> int:
    """Samples per marginal estimate.

    ``m = ceil(mult * e^2 r^2 / (2 eps^2) * spread^2 * ln(2 / p))``: the
    Hoeffding count for additive error ``(eps / r) * d_upper * (1 - ybar')``
    with the floor ``1 - ybar' >= 1/e`` that holds up to t = 1.
    """
    if r < 1:
        raise ValueError(f"rank must be >= 1, got {r}")
    if not bounds.d_upper > 0.0:
        raise ValueError("d_upper = 0: every marginal is non-positive, nothing to estimate")
    p = cfg.resolved_failure_prob(n)
    base = math.e**2 * r**2 / (2.0 * cfg.epsilon**2) * bounds.spread**2 * math.log(2.0 / p)
    m = max(1, math.ceil(cfg.sample_multiplier * base))
    if cfg.sample_cap is not None:
        m = min(m, cfg.sample_cap)
    return m


def estimate_marginal(
    f: SubmodularOracle, y: np.ndarray, e: int, m: int, stream: RandomStream
) -> MarginalEstimate:
    """Average of ``f(R_i + e) - f(R_i)`` over m iid draws ``R_i ~ R(y)``.

    Always 2m value calls, issued as one paired batch. Draws that already
    contain ``e`` contribute an exact zero.
    """
    if m < 1:
        raise ValueError("need at least one sample")
    plus, base = f.values_pair(sample_random_sets(y, m, stream), e)
    diffs = plus - base
    if np.all(diffs == diffs[0]):
        value = float(diffs[0])
    else:
        value = float(diffs.mean())
    return MarginalEstimate(e, value, m)
