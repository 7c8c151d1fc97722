import numpy as np
import pytest

from conftest import subsets
from measured_greedy.functions import CountingOracle, FunctionOracle, ModularFunction
from measured_greedy.instances import random_cut, random_partition
from measured_greedy.matroids import GraphicMatroid, UniformMatroid
from measured_greedy.reference import brute_force_opt, verify_submodularity


def test_brute_force_examples(triangle, uniform1):
    res = brute_force_opt(triangle, uniform1)
    assert (res.opt_set.ids(), res.opt_value, res.enumerated_count) == ([0], 2.0, 8)
    zero = brute_force_opt(ModularFunction([0.0, 0.0]), UniformMatroid(2, 1))
    assert zero.opt_set.ids() == [] and zero.opt_value == 0.0
    top2 = brute_force_opt(ModularFunction([1, 3, 2]), UniformMatroid(3, 2))
    assert top2.opt_set.ids() == [1, 2] and top2.opt_value == 5.0


def test_brute_force_matches_plain_enumeration():
    rng = np.random.default_rng(7)
    f = random_cut(9, rng)
    M = random_partition(9, rng, num_parts=3, capacity=2)
    best = max((f(S), sorted(S)) for S in subsets(9) if M.is_independent(S))
    res = brute_force_opt(f, M)
    assert res.opt_value == pytest.approx(best[0], abs=1e-9)
    assert f(res.opt_set) == res.opt_value
    assert M.is_independent(res.opt_set)


def test_brute_force_costs_two_to_the_n_calls():
    c = CountingOracle(ModularFunction(np.arange(6.0)))
    brute_force_opt(c, GraphicMatroid(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]))
    assert c.calls == 64


def test_verify_submodularity_examples(triangle):
    assert verify_submodularity(triangle)
    assert verify_submodularity(ModularFunction([1.0, 2.0, 3.0]))
    assert not verify_submodularity(FunctionOracle(3, lambda S: float(len(S) ** 2)))


def test_verify_submodularity_sampled_path():
    rng = np.random.default_rng(0)
    assert verify_submodularity(random_cut(14, rng), pairs=200)
    assert not verify_submodularity(FunctionOracle(14, lambda S: float(len(S) ** 2)), pairs=200)
