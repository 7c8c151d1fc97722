"""Ground sets, element sets, fractional points and seeded random streams."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

MASK64 = (1 << 64) - 1

# Sampling phases; part of every derived stream id.
PHASE_ESTIMATE = 1
PHASE_MONITOR = 2
PHASE_ROUNDING = 3
PHASE_TEST = 4


@dataclass(frozen=True)
class GroundSet:
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"ground set needs n >= 1, got {self.n}")

    def __len__(self) -> int:
        return self.n

    def full(self) -> ElementSet:
        return ElementSet(self.n, (1 << self.n) - 1)

    def empty(self) -> ElementSet:
        return ElementSet(self.n, 0)


@dataclass(frozen=True)
class ElementSet:
    """Subset of ``{0, ..., n-1}`` stored as an integer bitset.

    Python integers are arbitrary width, so ``bits`` is a single word for
    n <= 64 and grows transparently beyond that.
    """

    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bitset {self.bits:#x} has members outside 0..{self.n - 1}")

    @classmethod
    def from_ids(cls, n: int, ids: Iterable[int]) -> ElementSet:
        bits = 0
        for i in ids:
            i = int(i)
            if not 0 <= i < n:
                raise ValueError(f"element {i} outside ground set of size {n}")
            bits |= 1 << i
        return cls(n, bits)

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> ElementSet:
        mask = np.asarray(mask, dtype=bool)
        return cls.from_ids(mask.shape[0], np.flatnonzero(mask))

    def __contains__(self, i: object) -> bool:
        return isinstance(i, (int, np.integer)) and 0 <= i < self.n and bool(self.bits >> int(i) & 1)

    def __iter__(self) -> Iterator[int]:
        bits, i = self.bits, 0
        while bits:
            if bits & 1:
                yield i
            bits >>= 1
            i += 1

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __repr__(self) -> str:
        return f"ElementSet(n={self.n}, {sorted(self)})"

    def add(self, i: int) -> ElementSet:
        return ElementSet.from_ids(self.n, [i]) | self

    def remove(self, i: int) -> ElementSet:
        return ElementSet(self.n, self.bits & ~(1 << i))

    def __or__(self, other: ElementSet) -> ElementSet:
        return ElementSet(self.n, self.bits | other.bits)

    def __and__(self, other: ElementSet) -> ElementSet:
        return ElementSet(self.n, self.bits & other.bits)

    def issubset(self, other: ElementSet) -> bool:
        return self.bits & ~other.bits == 0

    def ids(self) -> list[int]:
        return list(self)

    def to_mask(self) -> np.ndarray:
        raw = self.bits.to_bytes((self.n + 7) // 8, "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        return bits[: self.n].astype(bool)

    def sort_key(self) -> tuple[int, ...]:
        """Key for lexicographic order on ascending member tuples."""
        return tuple(self)


def all_subset_masks(n: int) -> np.ndarray:
    """Every subset of an n-element ground set as rows of a boolean matrix.

    Row ``k`` is the subset whose bitset equals ``k``.
    """
    codes = np.arange(1 << n, dtype=np.int64)
    return ((codes[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)


# FractionalPoint: a float64 vector with every coordinate in [0, 1].

def as_point(y: Iterable[float] | np.ndarray, n: int | None = None) -> np.ndarray:
    y = np.array(y, dtype=np.float64, copy=True).reshape(-1)
    if n is not None and y.shape[0] != n:
        raise ValueError(f"point has {y.shape[0]} coordinates, expected {n}")
    if not np.all(np.isfinite(y)) or np.any(y < 0.0) or np.any(y > 1.0):
        raise ValueError("fractional point coordinates must lie in [0, 1]")
    return y


def clamp(y: np.ndarray) -> np.ndarray:
    return np.clip(y, 0.0, 1.0)


def indicator(S: ElementSet) -> np.ndarray:
    return S.to_mask().astype(np.float64)


def join_with_indicator(y: np.ndarray, S: ElementSet) -> np.ndarray:
    """Coordinate-wise maximum of ``y`` and the incidence vector of ``S``."""
    out = np.array(y, dtype=np.float64, copy=True)
    out[S.to_mask()] = 1.0
    return out


def derive_stream_id(*labels: int) -> int:
    """Hash a tuple of integer labels (phase, step, element, ...) to 64 bits."""
    h = hashlib.blake2b(digest_size=8)
    for label in labels:
        h.update(int(label).to_bytes(8, "little", signed=True))
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class RandomStream:
    """Counter-based random stream keyed by ``(master_seed, stream_id)``.

    Backed by Philox: the key selects the stream and the internal counter
    walks through it, so equal keys always reproduce the same sequence and
    the n-th draw does not depend on who else is sampling.
    """

    master_seed: int
    stream_id: int

    @classmethod
    def derive(cls, master_seed: int, *labels: int) -> RandomStream:
        return cls(master_seed, derive_stream_id(*labels))

    def generator(self) -> np.random.Generator:
        key = np.array([self.master_seed & MASK64, self.stream_id & MASK64], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def sample_random_sets(y: np.ndarray, m: int, stream: RandomStream) -> np.ndarray:
    """Draw ``m`` iid sets from R(y) as an ``(m, n)`` boolean matrix.

    Each membership test compares one 32-bit word of the Philox output with
    ``floor(y_i * 2^32)``, so inclusion probabilities are exact at 0 and 1
    and within 2^-32 of ``y_i`` otherwise. Row ``i`` uses words
    ``i*n .. (i+1)*n - 1``, so any row range can be regenerated on its own
    by advancing the counter.
    """
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[0]
    words = stream.generator().bit_generator.random_raw((m * n + 1) // 2)
    u = words.view(np.uint32)[: m * n].reshape(m, n)
    cut = np.minimum(np.floor(y * 2.0**32), 2.0**32 - 1).astype(np.uint32)
    X = u < cut
    X[:, y >= 1.0] = True
    return X


def sample_random_set(y: np.ndarray, stream: RandomStream) -> ElementSet:
    return ElementSet.from_mask(sample_random_sets(y, 1, stream)[0])
