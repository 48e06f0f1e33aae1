"""Facility location on random shortest path metrics.

Exponential edge weights on the complete graph, the induced shortest-path
metric, the heuristic that opens the kappa cheapest facilities, exact
enumeration solvers, closed-form bounds and seeded Monte Carlo checks.
"""
from .bounds import (BoundReport, MomentBounds, PadeSandwich, corollary_regime,
                     exp_integral_oracle, moment_bounds, normalized_exp_integral,
                     opt_lower_tail_bound, pade_bounds, sample_opt_nk_lb, theorem2_bound)
from .experiments import (ExperimentConfig, ExperimentResult, derive_seed,
                          run_bound_suite, run_distribution_suite, run_ratio_experiment,
                          run_sweep)
from .fileio import read_instance, write_instance
from .flp import (CostProfile, Instance, KappaInfo, Solution, alg_moments, alg_solve,
                  kappa, make_instance, opt_exact, opt_exact_k, solution_cost)
from .metric import EdgeWeights, Metric, build_metric, sample_edge_weights, validate_metric
from .stochastics import (GammaSpec, KsResult, dominance_check, gamma_dominance_condition,
                          harmonic, ks_one_sample, ks_two_sample, sample_alg_direct,
                          sample_exp_sum, sample_gamma_int, scaled_max_cdf, sum_exp_range_cdf)

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "MomentBounds", "PadeSandwich", "corollary_regime", "exp_integral_oracle",
    "moment_bounds", "normalized_exp_integral", "opt_lower_tail_bound", "pade_bounds",
    "sample_opt_nk_lb", "theorem2_bound", "ExperimentConfig", "ExperimentResult",
    "derive_seed", "run_bound_suite", "run_distribution_suite", "run_ratio_experiment",
    "run_sweep", "read_instance", "write_instance", "CostProfile", "Instance", "KappaInfo",
    "Solution", "alg_moments", "alg_solve", "kappa", "make_instance", "opt_exact",
    "opt_exact_k", "solution_cost", "EdgeWeights", "Metric", "build_metric",
    "sample_edge_weights", "validate_metric", "GammaSpec", "KsResult", "dominance_check",
    "gamma_dominance_condition", "harmonic", "ks_one_sample", "ks_two_sample",
    "sample_alg_direct", "sample_exp_sum", "sample_gamma_int", "scaled_max_cdf",
    "sum_exp_range_cdf",
]
