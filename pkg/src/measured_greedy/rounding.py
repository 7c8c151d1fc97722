"""Sample-and-repair rounding of a fractional point to an independent set.

Heuristic: no approximation guarantee is claimed for the rounded set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PHASE_ROUNDING, ElementSet, RandomStream, sample_random_sets
from .functions import SubmodularOracle
from .matroids import MatroidOracle


@dataclass(frozen=True)
class RoundingConfig:
    attempts: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        if self.attempts < 1:
            raise ValueError("need at least one rounding attempt")


def repair(f: SubmodularOracle, M: MatroidOracle, mask: np.ndarray) -> np.ndarray:
    """Drop elements until independent, each time the one whose removal costs least.

    Removal can raise the value of a non-monotone function; such drops come first.
    """
    R = mask.copy()
    while not M.is_independent(R):
        members = np.flatnonzero(R)
        drops = np.repeat(R[None, :], len(members), axis=0)
        drops[np.arange(len(members)), members] = False
        vals = f.values(np.concatenate([R[None, :], drops]))
        loss = vals[0] - vals[1:]
        # ties drop the largest id, so lower ids survive
        worst = np.flatnonzero(loss == loss.min())[-1]
        R[members[worst]] = False
    return R


def sample_and_repair(
    f: SubmodularOracle, M: MatroidOracle, y: np.ndarray, cfg: RoundingConfig = RoundingConfig()
) -> ElementSet:
    """Best of ``cfg.attempts`` repaired draws from R(y)."""
    y = np.asarray(y, dtype=np.float64)
    best_mask, best_value = None, -np.inf
    for a in range(cfg.attempts):
        stream = RandomStream.derive(cfg.seed, PHASE_ROUNDING, a)
        R = repair(f, M, sample_random_sets(y, 1, stream)[0])
        value = f.evaluate(R)
        if value > best_value:
            best_mask, best_value = R, value
    return ElementSet.from_mask(best_mask)
