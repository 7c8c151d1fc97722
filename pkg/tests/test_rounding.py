import numpy as np
import pytest

from measured_greedy.core import ElementSet
from measured_greedy.functions import CountingOracle, ModularFunction
from measured_greedy.instances import random_instance
from measured_greedy.matroids import UniformMatroid
from measured_greedy.rounding import RoundingConfig, repair, sample_and_repair
from measured_greedy.solver import SolverConfig, accelerated_mcg


def test_vertex_and_origin_round_to_themselves(triangle, uniform1):
    S = ElementSet.from_ids(3, [2])
    assert sample_and_repair(triangle, uniform1, S.to_mask().astype(float), RoundingConfig(5)) == S
    assert sample_and_repair(triangle, uniform1, np.zeros(3), RoundingConfig(5)) == ElementSet(3)


def test_triangle_rounds_to_heavy_element(triangle, uniform1):
    # every draw containing 0 repairs to {0}, so the rate is P(0 in R) = 0.9
    y = np.array([0.9, 0.05, 0.05])
    hits = sum(sample_and_repair(triangle, uniform1, y, RoundingConfig(1, seed)).ids() == [0] for seed in range(2000))
    assert hits / 2000 >= 0.85
    assert hits / 2000 == pytest.approx(0.9, abs=0.03)


def test_repair_drops_cheapest_first():
    f = ModularFunction([5.0, 1.0, 3.0])
    R = repair(f, UniformMatroid(3, 2), np.ones(3, dtype=bool))
    assert np.flatnonzero(R).tolist() == [0, 2]


def test_repair_leaves_independent_sets_alone():
    c = CountingOracle(ModularFunction([1.0, 1.0]))
    R = repair(c, UniformMatroid(2, 2), np.ones(2, dtype=bool))
    assert R.all() and c.calls == 0


def test_rounded_set_is_independent_and_best_of_attempts():
    inst = random_instance("cut", 9, 1)
    y, _ = accelerated_mcg(inst.function, inst.matroid, SolverConfig(0.2, sample_cap=100))
    S = sample_and_repair(inst.function, inst.matroid, y, RoundingConfig(30, 4))
    assert inst.matroid.is_independent(S)
    # attempt 0 of the 30 is the single-attempt draw with the same seed
    first = sample_and_repair(inst.function, inst.matroid, y, RoundingConfig(1, 4))
    assert inst.function(S) >= inst.function(first)


def test_rounding_config_validation():
    with pytest.raises(ValueError):
        RoundingConfig(0)
