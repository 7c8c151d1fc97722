"""Submodular value oracles.

Every oracle evaluates a batch of sets given as rows of a boolean matrix;
one row is one value-oracle call. ``evaluate`` is the single-set shortcut.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .core import ElementSet, GroundSet

SetLike = Union[ElementSet, np.ndarray, Iterable[int]]


def as_mask(S: SetLike, n: int) -> np.ndarray:
    if isinstance(S, ElementSet):
        if S.n != n:
            raise ValueError(f"set over ground of size {S.n}, oracle has {n}")
        return S.to_mask()
    if isinstance(S, np.ndarray) and S.dtype == bool:
        if S.shape != (n,):
            raise ValueError(f"mask shape {S.shape} does not match n={n}")
        return S
    return ElementSet.from_ids(n, S).to_mask()


class SubmodularOracle:
    """Base class for value oracles ``f: 2^E -> R+``."""

    kind = "abstract"

    def __init__(self, n: int):
        self.ground = GroundSet(n)

    @property
    def n(self) -> int:
        return self.ground.n

    def values(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def values_pair(self, X: np.ndarray, e: int) -> tuple[np.ndarray, np.ndarray]:
        """``(f(X_i + e), f(X_i))`` for every row: 2 value calls per row.

        Subclasses may share work between the two halves.
        """
        Xe = X.copy()
        Xe[:, e] = True
        v = self.values(np.concatenate([Xe, X]))
        m = X.shape[0]
        return v[:m], v[m:]

    def evaluate(self, S: SetLike) -> float:
        return float(self.values(as_mask(S, self.n)[None, :])[0])

    def __call__(self, S: SetLike) -> float:
        return self.evaluate(S)


class CutFunction(SubmodularOracle):
    """Weighted cut of an undirected graph: weight of edges leaving S."""

    kind = "cut"

    def __init__(self, n: int, edges: Sequence[tuple[int, int, float]]):
        super().__init__(n)
        self.edges = [(int(u), int(v), float(w)) for u, v, w in edges]
        W = np.zeros((n, n))
        for u, v, w in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if w < 0:
                raise ValueError(f"edge ({u}, {v}) has negative weight {w}")
            if u != v:
                W[u, v] += w
                W[v, u] += w
        self.adjacency = W

    def values(self, X: np.ndarray) -> np.ndarray:
        Xf = X.astype(np.float64)
        return np.einsum("ij,ij->i", Xf @ self.adjacency, 1.0 - Xf)

    def values_pair(self, X: np.ndarray, e: int) -> tuple[np.ndarray, np.ndarray]:
        Xf = X.astype(np.float64)
        toward = Xf @ self.adjacency
        base = np.einsum("ij,ij->i", toward, 1.0 - Xf)
        # adding e cuts its edges to the outside and uncuts those into X
        gain = self.adjacency[e].sum() - 2.0 * toward[:, e]
        return np.where(X[:, e], base, base + gain), base


class CoverageFunction(SubmodularOracle):
    """Weighted coverage: total weight of universe items covered by S."""

    kind = "coverage"

    def __init__(self, sets: Sequence[Iterable[int]], weights: Sequence[float] | None = None):
        super().__init__(len(sets))
        self.sets = [sorted({int(u) for u in s}) for s in sets]
        universe = 1 + max((max(s) for s in self.sets if s), default=-1)
        if weights is None:
            weights = [1.0] * universe
        self.weights = np.asarray(weights, dtype=np.float64)
        if self.weights.shape[0] < universe:
            raise ValueError(f"{self.weights.shape[0]} universe weights for {universe} items")
        if np.any(self.weights < 0):
            raise ValueError("universe weights must be non-negative")
        C = np.zeros((self.n, self.weights.shape[0]))
        for i, s in enumerate(self.sets):
            if any(u < 0 for u in s):
                raise ValueError(f"element {i} covers a negative item id")
            C[i, s] = 1.0
        self.membership = C

    def values(self, X: np.ndarray) -> np.ndarray:
        covered = (X.astype(np.float64) @ self.membership) > 0.0
        return covered @ self.weights

    def values_pair(self, X: np.ndarray, e: int) -> tuple[np.ndarray, np.ndarray]:
        covered = (X.astype(np.float64) @ self.membership) > 0.0
        plus = covered | (self.membership[e] > 0.0)
        return plus @ self.weights, covered @ self.weights


class FacilityLocationFunction(SubmodularOracle):
    """Each client takes its best open facility; f(empty) = 0."""

    kind = "facility"

    def __init__(self, benefits: Sequence[Sequence[float]] | np.ndarray):
        B = np.asarray(benefits, dtype=np.float64)
        if B.ndim != 2:
            raise ValueError("benefit matrix must be clients x facilities")
        if np.any(B < 0):
            raise ValueError("benefits must be non-negative")
        super().__init__(B.shape[1])
        self.benefits = B
        # Facility j gets weight 2^k for client c when it is the k-th worst
        # for c; the top set bit of X @ priority then names the best open one.
        c = B.shape[0]
        order = np.argsort(B, axis=1, kind="stable")
        self._priority = np.zeros((self.n, c))
        for k in range(self.n):
            self._priority[order[:, k], np.arange(c)] = 2.0**k
        # per client: 0.0 (nothing open) followed by benefits in ascending order
        ranked = np.take_along_axis(B, order, axis=1)
        self._table = np.concatenate([np.zeros((c, 1)), ranked], axis=1).ravel()
        self._offset = np.arange(c, dtype=np.intp) * (self.n + 1)

    def values(self, X: np.ndarray) -> np.ndarray:
        if self.n > 52:
            best = np.zeros((X.shape[0], self.benefits.shape[0]))
            for j in range(self.n):
                np.maximum(best, X[:, j, None] * self.benefits[None, :, j], out=best)
            return best.sum(axis=1)
        return self._best(X).sum(axis=1)

    def _best(self, X: np.ndarray) -> np.ndarray:
        """Benefit each client gets from its best open facility."""
        _, exponent = np.frexp(X.astype(np.float64) @ self._priority)
        return self._table[exponent.astype(np.intp) + self._offset]

    def values_pair(self, X: np.ndarray, e: int) -> tuple[np.ndarray, np.ndarray]:
        if self.n > 52:
            return super().values_pair(X, e)
        best = self._best(X)
        base = best.sum(axis=1)
        gain = np.maximum(self.benefits[:, e] - best, 0.0).sum(axis=1)
        return np.where(X[:, e], base, base + gain), base


class ModularFunction(SubmodularOracle):
    kind = "modular"

    def __init__(self, weights: Sequence[float]):
        w = np.asarray(weights, dtype=np.float64)
        if np.any(w < 0):
            raise ValueError("modular weights must be non-negative")
        super().__init__(w.shape[0])
        self.weights = w

    def values(self, X: np.ndarray) -> np.ndarray:
        return X.astype(np.float64) @ self.weights


class FunctionOracle(SubmodularOracle):
    """Adapter for an arbitrary callable on frozensets of element ids.

    Nothing is checked; use ``reference.verify_submodularity`` first.
    """

    kind = "callable"

    def __init__(self, n: int, fn: Callable[[frozenset[int]], float]):
        super().__init__(n)
        self.fn = fn

    def values(self, X: np.ndarray) -> np.ndarray:
        return np.array([float(self.fn(frozenset(np.flatnonzero(row).tolist()))) for row in X])


class CountingOracle(SubmodularOracle):
    """Counts value-oracle calls (one per evaluated set) and passes values through."""

    def __init__(self, inner: SubmodularOracle):
        super().__init__(inner.n)
        self.inner = inner
        self.kind = inner.kind
        self.calls = 0
        self._lock = threading.Lock()

    def values(self, X: np.ndarray) -> np.ndarray:
        out = self.inner.values(X)
        with self._lock:
            self.calls += X.shape[0]
        return out

    def values_pair(self, X: np.ndarray, e: int) -> tuple[np.ndarray, np.ndarray]:
        out = self.inner.values_pair(X, e)
        with self._lock:
            self.calls += 2 * X.shape[0]
        return out

    def reset(self) -> None:
        with self._lock:
            self.calls = 0


@dataclass(frozen=True)
class MarginalBounds:
    """Upper bound on gains (``d_upper``) and on losses (``d_lower``) of single elements."""

    d_upper: float
    d_lower: float

    @property
    def spread(self) -> float:
        """Ratio ``(d_upper + d_lower) / d_upper`` driving the sample count."""
        return (self.d_upper + self.d_lower) / self.d_upper


def marginal(f: SubmodularOracle, S: SetLike, i: int) -> float:
    mask = as_mask(S, f.n)
    if mask[i]:
        return 0.0
    plus = mask.copy()
    plus[i] = True
    v = f.values(np.stack([plus, mask]))
    return float(v[0] - v[1])


def compute_marginal_bounds(f: SubmodularOracle) -> MarginalBounds:
    """Largest singleton gain and largest loss from adding the last element.

    By submodularity ``f_S(i) <= f_{}(i)`` and ``f_S(i) >= f_{E-i}(i)``, so
    both bounds are exact. Costs ``2n + 2`` value calls, made in one batch:
    the empty set, every singleton, the full set and every ``E - i``.
    """
    n = f.n
    eye = np.eye(n, dtype=bool)
    X = np.concatenate([np.zeros((1, n), bool), eye, np.ones((1, n), bool), ~eye])
    v = f.values(X)
    empty, singles, full, drop_one = v[0], v[1 : n + 1], v[n + 1], v[n + 2 :]
    d_upper = max(0.0, float(np.max(singles - empty)))
    d_lower = max(0.0, float(np.max(drop_one - full)))
    return MarginalBounds(d_upper, d_lower)
