"""Accelerated measured continuous greedy for non-negative submodular
maximization under a matroid constraint."""

from .core import ElementSet, GroundSet, RandomStream, join_with_indicator, sample_random_set
from .functions import (
    CountingOracle,
    CoverageFunction,
    CutFunction,
    FacilityLocationFunction,
    FunctionOracle,
    MarginalBounds,
    ModularFunction,
    SubmodularOracle,
    compute_marginal_bounds,
    marginal,
)
from .matroids import (
    CountingMatroid,
    GraphicMatroid,
    MatroidOracle,
    PartitionMatroid,
    UniformMatroid,
    polytope_membership,
    rank,
)
from .multilinear import EstimatorConfig, estimate_marginal, exact_F, exact_marginal, sample_count
from .reference import brute_force_opt, verify_submodularity
from .rounding import RoundingConfig, sample_and_repair
from .solver import (
    RunTrace,
    SolverConfig,
    accelerated_mcg,
    decreasing_threshold,
    discrete_step_update,
    predicted_oracle_calls,
)

__version__ = "0.1.0"
