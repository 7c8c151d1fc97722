"""Accelerated measured continuous greedy with a decreasing-threshold inner loop.

The outer loop walks t = 0, delta, ..., 1 - delta. At every step the inner
loop scans a geometric ladder of thresholds starting at ``d_upper`` and
builds an independent set B; the coordinates in B then grow by

    smooth:         y <- 1 + exp(-delta) * (y - 1)
    discrete-step:  y <- y + delta * (1 - y)          (comparison baseline)
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np

from .core import PHASE_ESTIMATE, PHASE_MONITOR, ElementSet, RandomStream, clamp
from .functions import CountingOracle, MarginalBounds, SubmodularOracle, compute_marginal_bounds
from .matroids import CountingMatroid, MatroidOracle, rank
from .multilinear import (
    EXACT_MAX_N,
    EstimatorConfig,
    estimate_marginal,
    exact_F,
    sample_count,
    sampled_F,
    subset_values,
)

log = logging.getLogger(__name__)

SMOOTH = "smooth"
DISCRETE_STEP = "discrete-step"
BASELINE_MODES = (SMOOTH, DISCRETE_STEP)

# candidates this close to 1 have a provably negligible marginal
SATURATED = 1.0 - 1e-12


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float
    seed: int = 0
    sample_multiplier: float = 1.0
    sample_cap: int | None = None
    failure_prob: float | None = None
    baseline: str = SMOOTH
    monitor_samples: int = 2000

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.baseline not in BASELINE_MODES:
            raise ValueError(f"baseline must be one of {BASELINE_MODES}, got {self.baseline!r}")
        if self.epsilon >= 0.25:
            log.warning("epsilon=%g >= 1/4: the approximation guarantee is vacuous", self.epsilon)
        self.estimator  # validates the estimator fields

    @property
    def steps(self) -> int:
        # small slack so that e.g. 1/(1/3) does not round up to 4
        return math.ceil(1.0 / self.epsilon - 1e-9)

    @property
    def delta(self) -> float:
        return 1.0 / self.steps

    @property
    def estimator(self) -> EstimatorConfig:
        return EstimatorConfig(self.epsilon, self.sample_multiplier, self.sample_cap, self.failure_prob)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["delta"] = self.delta
        d["steps"] = self.steps
        return d


@dataclass
class ThresholdPass:
    threshold: float
    accepted: list[int]
    # None where the candidate was skipped as saturated
    estimates: list[float | None]


@dataclass
class StepRecord:
    index: int
    t: float
    y: list[float]
    base: list[int]
    ybar_prime: float
    stop_threshold: float
    samples_per_estimate: int
    passes: list[ThresholdPass] = field(default_factory=list)
    value_calls: int = 0
    independence_calls: int = 0
    F: float | None = None
    F_stderr: float | None = None
    F_exact: bool = True

    @property
    def thresholds(self) -> list[float]:
        return [p.threshold for p in self.passes]


@dataclass
class RunTrace:
    config: SolverConfig
    n: int
    rank: int
    bounds: MarginalBounds
    samples_per_estimate: int
    steps: list[StepRecord] = field(default_factory=list)
    y_final: list[float] = field(default_factory=list)
    F_final: float | None = None
    F_final_stderr: float | None = None
    F_exact: bool = True
    setup_value_calls: int = 0
    setup_independence_calls: int = 0
    value_calls: int = 0
    independence_calls: int = 0

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["config"] = self.config.to_dict()
        return d


def advance(y: np.ndarray | float, delta: float, mode: str = SMOOTH):
    """Grow coordinates toward 1 by one step of the chosen rule."""
    if mode == SMOOTH:
        return 1.0 + math.exp(-delta) * (y - 1.0)
    return y + delta * (1.0 - y)


def discrete_step_update(y: np.ndarray, B: ElementSet, delta: float) -> np.ndarray:
    """Baseline update: ``y_i += delta * (1 - y_i)`` for i in B."""
    out = np.array(y, dtype=np.float64, copy=True)
    mask = B.to_mask()
    out[mask] = advance(out[mask], delta, DISCRETE_STEP)
    return clamp(out)


def smooth_update(y: np.ndarray, B: ElementSet, delta: float) -> np.ndarray:
    out = np.array(y, dtype=np.float64, copy=True)
    mask = B.to_mask()
    out[mask] = advance(out[mask], delta, SMOOTH)
    return clamp(out)


def threshold_schedule(d_upper: float, epsilon: float, stop: float) -> list[float]:
    """``d_upper, d_upper (1-eps), ...`` while the value stays >= ``stop``."""
    if not stop > 0.0:
        raise ValueError(f"stopping threshold must be positive, got {stop}")
    out = []
    w = d_upper
    while w >= stop:
        out.append(w)
        w *= 1.0 - epsilon
    return out


def stopping_threshold(d_upper: float, epsilon: float, r: int, ybar_prime: float) -> float:
    return epsilon * d_upper / r * (1.0 - ybar_prime)


def decreasing_threshold(
    f: SubmodularOracle,
    y: np.ndarray,
    epsilon: float,
    delta: float,
    M: MatroidOracle,
    bounds: MarginalBounds,
    r: int,
    m: int,
    seed: int = 0,
    step: int = 0,
    mode: str = SMOOTH,
) -> tuple[ElementSet, StepRecord]:
    """Pick an independent set B against a decreasing threshold.

    Every threshold pass scans all elements in id order. Each element gets
    a fresh m-sample estimate of its marginal at ``y(B, delta)``, i.e. ``y``
    with the coordinates already in B advanced by one step, and one
    independence query for ``B + e``. It joins B when both succeed.

    Random draws for (step, pass, element) come from their own stream, so
    the result does not depend on evaluation order.
    """
    n = y.shape[0]
    y = np.asarray(y, dtype=np.float64)
    stepped = clamp(advance(y, delta, mode))
    ybar_prime = float(stepped.max())
    record = StepRecord(
        index=step,
        t=step * delta,
        y=y.tolist(),
        base=[],
        ybar_prime=ybar_prime,
        stop_threshold=0.0,
        samples_per_estimate=m,
    )
    B = np.zeros(n, dtype=bool)
    if not bounds.d_upper > 0.0 or r == 0:
        return ElementSet(n), record

    stop = stopping_threshold(bounds.d_upper, epsilon, r, ybar_prime)
    if not stop > 0.0:
        raise ValueError("a coordinate of y(t) + delta is saturated; the threshold ladder never stops")
    record.stop_threshold = stop
    point = y.copy()
    for k, w in enumerate(threshold_schedule(bounds.d_upper, epsilon, stop)):
        estimates: list[float | None] = []
        accepted = []
        for e in range(n):
            if y[e] >= SATURATED:
                estimates.append(None)
                continue
            stream = RandomStream.derive(seed, PHASE_ESTIMATE, step, k, e)
            est = estimate_marginal(f, point, e, m, stream).value
            estimates.append(est)
            trial = B.copy()
            trial[e] = True
            independent = M.is_independent(trial)
            if est >= w and independent and not B[e]:
                B[e] = True
                point[e] = stepped[e]
                accepted.append(e)
        record.passes.append(ThresholdPass(w, accepted, estimates))
    record.base = np.flatnonzero(B).tolist()
    return ElementSet.from_mask(B), record


class _Monitor:
    """Uncounted F(y) evaluations for the trace."""

    def __init__(self, f: SubmodularOracle, config: SolverConfig):
        self.f = f
        self.config = config
        self.table = subset_values(f) if f.n <= EXACT_MAX_N else None

    def __call__(self, y: np.ndarray, step: int) -> tuple[float, float | None, bool]:
        if self.table is not None:
            return exact_F(self.f, y, self.table), None, True
        stream = RandomStream.derive(self.config.seed, PHASE_MONITOR, step)
        value, stderr = sampled_F(self.f, y, self.config.monitor_samples, stream)
        return value, stderr, False


def accelerated_mcg(
    f: SubmodularOracle, M: MatroidOracle, config: SolverConfig
) -> tuple[np.ndarray, RunTrace]:
    """Run the continuous greedy from y = 0 to t = 1.

    Returns the final fractional point and a trace whose call tallies count
    only the algorithm's own oracle queries (setup included).
    """
    if f.n != M.n:
        raise ValueError(f"function has n={f.n} but matroid has n={M.n}")
    n = f.n
    cf = CountingOracle(f)
    cm = CountingMatroid(M)
    bounds = compute_marginal_bounds(cf)
    r = rank(cm)
    active = r > 0 and bounds.d_upper > 0.0
    m = sample_count(r, bounds, n, config.estimator) if active else 0
    trace = RunTrace(
        config=config,
        n=n,
        rank=r,
        bounds=bounds,
        samples_per_estimate=m,
        setup_value_calls=cf.calls,
        setup_independence_calls=cm.calls,
    )
    monitor = _Monitor(f, config)
    delta = config.delta
    y = np.zeros(n)
    for s in range(config.steps):
        v0, i0 = cf.calls, cm.calls
        if active:
            B, rec = decreasing_threshold(
                cf, y, config.epsilon, delta, cm, bounds, r, m, config.seed, s, config.baseline
            )
        else:
            B = ElementSet(n)
            rec = StepRecord(s, s * delta, y.tolist(), [], float(clamp(advance(y, delta, config.baseline)).max()), 0.0, 0)
        rec.value_calls = cf.calls - v0
        rec.independence_calls = cm.calls - i0
        rec.F, rec.F_stderr, rec.F_exact = monitor(y, s)
        trace.steps.append(rec)
        if config.baseline == SMOOTH:
            y = smooth_update(y, B, delta)
        else:
            y = discrete_step_update(y, B, delta)
    trace.y_final = y.tolist()
    trace.F_final, trace.F_final_stderr, trace.F_exact = monitor(y, config.steps)
    trace.value_calls = cf.calls
    trace.independence_calls = cm.calls
    return y, trace


@dataclass(frozen=True)
class CallPrediction:
    value_calls: int
    independence_calls: int
    thresholds_per_step: tuple[int, ...]


def predicted_oracle_calls(
    n: int,
    r: int,
    bounds: MarginalBounds,
    config: SolverConfig,
    ybar_primes: Sequence[float] | None = None,
) -> CallPrediction:
    """Closed-form count of value and independence calls for one run.

    Per step: (#thresholds) * n estimates of 2m value calls each, plus one
    independence call per estimate; setup adds ``2n + 2`` value calls and
    ``n`` independence calls. The number of thresholds depends on
    ``ybar'``; by default it follows the largest coordinate the update rule
    allows, which the solver meets whenever one fixed element joins B in
    every step. Pass the realized ``ybar_primes`` from a trace to predict an
    arbitrary run.
    """
    value, indep = 2 * n + 2, n
    if r == 0 or not bounds.d_upper > 0.0:
        return CallPrediction(value, indep, (0,) * config.steps)
    m = sample_count(r, bounds, n, config.estimator)
    delta = config.delta
    counts = []
    top = 0.0
    for s in range(config.steps):
        if ybar_primes is None:
            ybar = min(1.0, max(0.0, advance(top, delta, config.baseline)))
            top = ybar
        else:
            ybar = ybar_primes[s]
        stop = stopping_threshold(bounds.d_upper, config.epsilon, r, ybar)
        k = len(threshold_schedule(bounds.d_upper, config.epsilon, stop))
        counts.append(k)
        value += k * n * 2 * m
        indep += k * n
    return CallPrediction(value, indep, tuple(counts))
