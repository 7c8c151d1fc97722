"""Matroid independence oracles, greedy rank and matroid-polytope membership."""

from __future__ import annotations

import threading
from typing import Callable, Sequence

import numpy as np

from .core import ElementSet, GroundSet, all_subset_masks
from .functions import SetLike, as_mask

GRAPHIC_MEMBERSHIP_MAX_VERTICES = 16


class UnsupportedMatroidError(ValueError):
    pass


class MatroidOracle:
    kind = "abstract"

    def __init__(self, n: int):
        self.ground = GroundSet(n)

    @property
    def n(self) -> int:
        return self.ground.n

    def _independent(self, mask: np.ndarray) -> bool:
        raise NotImplementedError

    def is_independent(self, S: SetLike) -> bool:
        return self._independent(as_mask(S, self.n))

    def independent_rows(self, X: np.ndarray) -> np.ndarray:
        """Independence of every row of a boolean matrix (one call per row)."""
        return np.fromiter((self._independent(row) for row in X), dtype=bool, count=X.shape[0])


class UniformMatroid(MatroidOracle):
    kind = "uniform"

    def __init__(self, n: int, k: int):
        super().__init__(n)
        if k < 0:
            raise ValueError(f"uniform matroid needs k >= 0, got {k}")
        self.k = int(k)

    def _independent(self, mask: np.ndarray) -> bool:
        return int(np.count_nonzero(mask)) <= self.k

    def independent_rows(self, X: np.ndarray) -> np.ndarray:
        return X.sum(axis=1) <= self.k


class PartitionMatroid(MatroidOracle):
    """At most ``capacities[p]`` elements from each part ``p``."""

    kind = "partition"

    def __init__(self, parts: Sequence[int], capacities: Sequence[int]):
        super().__init__(len(parts))
        self.parts = np.asarray(parts, dtype=np.int64)
        self.capacities = np.asarray(capacities, dtype=np.int64)
        if np.any(self.parts < 0) or np.any(self.parts >= len(self.capacities)):
            raise ValueError(f"part ids must lie in 0..{len(self.capacities) - 1}")
        if np.any(self.capacities < 0):
            raise ValueError("part capacities must be non-negative")
        self._onehot = np.eye(len(self.capacities), dtype=np.int64)[self.parts]

    def _independent(self, mask: np.ndarray) -> bool:
        counts = np.bincount(self.parts[mask], minlength=len(self.capacities))
        return bool(np.all(counts <= self.capacities))

    def independent_rows(self, X: np.ndarray) -> np.ndarray:
        return np.all(X.astype(np.int64) @ self._onehot <= self.capacities, axis=1)


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


class GraphicMatroid(MatroidOracle):
    """Edges of a multigraph; independent sets are forests.

    The union-find is rebuilt on every query so the oracle stays stateless.
    """

    kind = "graphic"

    def __init__(self, num_vertices: int, edges: Sequence[tuple[int, int]]):
        super().__init__(len(edges))
        self.num_vertices = int(num_vertices)
        self.edges = [(int(u), int(v)) for u, v in edges]
        for u, v in self.edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.num_vertices - 1}")

    def _independent(self, mask: np.ndarray) -> bool:
        uf = _UnionFind(self.num_vertices)
        for e in np.flatnonzero(mask):
            u, v = self.edges[e]
            if not uf.union(u, v):
                return False
        return True


class FunctionMatroid(MatroidOracle):
    """Independence given by a callable on frozensets; no polytope test."""

    kind = "callable"

    def __init__(self, n: int, fn: Callable[[frozenset[int]], bool]):
        super().__init__(n)
        self.fn = fn

    def _independent(self, mask: np.ndarray) -> bool:
        return bool(self.fn(frozenset(np.flatnonzero(mask).tolist())))


class CountingMatroid(MatroidOracle):
    def __init__(self, inner: MatroidOracle):
        super().__init__(inner.n)
        self.inner = inner
        self.kind = inner.kind
        self.calls = 0
        self._lock = threading.Lock()

    def _independent(self, mask: np.ndarray) -> bool:
        with self._lock:
            self.calls += 1
        return self.inner._independent(mask)

    def independent_rows(self, X: np.ndarray) -> np.ndarray:
        with self._lock:
            self.calls += X.shape[0]
        return self.inner.independent_rows(X)


def unwrap(M: MatroidOracle) -> MatroidOracle:
    while isinstance(M, CountingMatroid):
        M = M.inner
    return M


def greedy_basis(M: MatroidOracle) -> ElementSet:
    """Greedy single pass in id order; exactly n independence calls."""
    current = np.zeros(M.n, dtype=bool)
    for i in range(M.n):
        current[i] = True
        if not M.is_independent(current):
            current[i] = False
    return ElementSet.from_mask(current)


def rank(M: MatroidOracle) -> int:
    return len(greedy_basis(M))


def polytope_membership(M: MatroidOracle, y: np.ndarray, tol: float = 1e-9) -> bool:
    """Is ``y`` in the convex hull of independent-set incidence vectors?

    Checked through the rank inequalities of each supported matroid kind.
    """
    inner = unwrap(M)
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (inner.n,):
        raise ValueError(f"point has shape {y.shape}, matroid has n={inner.n}")
    if np.any(y < -tol) or np.any(y > 1.0 + tol):
        return False
    if isinstance(inner, UniformMatroid):
        return bool(y.sum() <= inner.k + tol)
    if isinstance(inner, PartitionMatroid):
        loads = np.bincount(inner.parts, weights=y, minlength=len(inner.capacities))
        return bool(np.all(loads <= inner.capacities + tol))
    if isinstance(inner, GraphicMatroid):
        return _forest_polytope_membership(inner, y, tol)
    raise UnsupportedMatroidError(f"no polytope membership test for matroid kind {inner.kind!r}")


def _forest_polytope_membership(M: GraphicMatroid, y: np.ndarray, tol: float) -> bool:
    # y(E[W]) <= |W| - 1 for every non-empty vertex set W; isolated vertices never tighten it
    used = sorted({u for e in M.edges for u in e})
    if not used:
        return True
    if len(used) > GRAPHIC_MEMBERSHIP_MAX_VERTICES:
        raise UnsupportedMatroidError(
            f"graphic membership enumerates vertex subsets; {len(used)} vertices exceeds "
            f"{GRAPHIC_MEMBERSHIP_MAX_VERTICES}"
        )
    index = {v: k for k, v in enumerate(used)}
    W = all_subset_masks(len(used))[1:]
    ends_u = np.array([index[u] for u, _ in M.edges])
    ends_v = np.array([index[v] for _, v in M.edges])
    inside = W[:, ends_u] & W[:, ends_v]
    load = inside.astype(np.float64) @ y
    return bool(np.all(load <= W.sum(axis=1) - 1 + tol))
