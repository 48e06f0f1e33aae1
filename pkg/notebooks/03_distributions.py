# %% [markdown]
# # Checking the heuristic's cost distribution
#
# Pipeline draws of ALG (sample a metric, run the heuristic) are compared
# with the closed-form CDF through a one-sample Kolmogorov-Smirnov test and
# with direct draws of the same law through a two-sample test.

# %%
import numpy as np

from rspfl import (CostProfile, ExperimentConfig, kappa, ks_one_sample, run_distribution_suite,
                   sum_exp_range_cdf)

res = run_distribution_suite(ExperimentConfig(10, "equal:0.3", 5000, master_seed=3))
print(res.summary())

# %% [markdown]
# The CDF of ALG - F_kappa is evaluated through an order statistic of n-1
# unit exponentials, summed in log space, so it stays finite for large n.

# %%
info = kappa(CostProfile.equal(0.3, 10))
x = np.linspace(0, 3, 7)
print(np.round(sum_exp_range_cdf(x, info.kappa, 10), 6))
print(np.round(sum_exp_range_cdf(x, 50, 400), 6))

# %% [markdown]
# A deliberately wrong reference CDF is rejected.

# %%
alg = res.column("ALG") - info.F_kappa
print(ks_one_sample(alg, lambda t: sum_exp_range_cdf(t, info.kappa + 2, 10)))
