"""Exhaustive ground truth for small instances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ElementSet, all_subset_masks
from .functions import SubmodularOracle
from .matroids import MatroidOracle
from .multilinear import EXACT_MAX_N, GroundSetTooLargeError, subset_values

EXHAUSTIVE_SUBMODULARITY_MAX_N = 12


@dataclass(frozen=True)
class BruteForceResult:
    opt_set: ElementSet
    opt_value: float
    enumerated_count: int


def brute_force_opt(f: SubmodularOracle, M: MatroidOracle, tol: float = 1e-12) -> BruteForceResult:
    """Best independent set by scanning all 2^n subsets.

    Values within ``tol`` (relative) of the maximum count as ties; the
    lexicographically smallest sorted id tuple wins.
    """
    n = f.n
    if n > EXACT_MAX_N:
        raise GroundSetTooLargeError(f"brute force needs n <= {EXACT_MAX_N}, got n={n}")
    values = subset_values(f)
    X = all_subset_masks(n)
    feasible = M.independent_rows(X)
    best = float(values[feasible].max())
    ties = np.flatnonzero(feasible & (values >= best - tol * max(1.0, abs(best))))
    sets = [ElementSet(n, int(code)) for code in ties]
    opt = min(sets, key=ElementSet.sort_key)
    return BruteForceResult(opt, float(values[opt.bits]), 1 << n)


def verify_submodularity(
    f: SubmodularOracle, tol: float = 1e-9, pairs: int = 1000, seed: int = 0
) -> bool:
    """Check ``f(A) + f(B) >= f(A | B) + f(A & B)``.

    Every pair of subsets for n <= 12, otherwise ``pairs`` random pairs.
    """
    n = f.n
    if n <= EXHAUSTIVE_SUBMODULARITY_MAX_N:
        v = subset_values(f)
        codes = np.arange(1 << n)
        for a in range(1 << n):
            lhs = v[a] + v
            rhs = v[a | codes] + v[a & codes]
            if np.any(lhs < rhs - tol):
                return False
        return True
    rng = np.random.default_rng(seed)
    A = rng.random((pairs, n)) < 0.5
    B = rng.random((pairs, n)) < 0.5
    fa, fb, fu, fi = (f.values(X) for X in (A, B, A | B, A & B))
    return bool(np.all(fa + fb >= fu + fi - tol))
