# %% [markdown]
# # The kappa-cheapest heuristic against exact enumeration
#
# Facility costs are sorted ascending. The heuristic opens the kappa cheapest
# vertices, where kappa is the largest index with f_i < 1/(i-1). Exact OPT
# enumerates all 2^n - 1 facility sets, so it is limited to n <= 20.

# %%
import numpy as np

from rspfl import (CostProfile, Instance, alg_moments, alg_solve, build_metric, kappa,
                   opt_exact, sample_edge_weights)

costs = CostProfile.equal(0.3, 10)
print("kappa:", kappa(costs))

rng = np.random.default_rng(11)
inst = Instance(build_metric(sample_edge_weights(10, rng)), costs)
alg, opt = alg_solve(inst), opt_exact(inst)
print("ALG", alg.open, round(alg.total, 4))
print("OPT", opt.open, round(opt.total, 4))
print("ratio", round(alg.total / opt.total, 4))

# %% [markdown]
# ALG has a closed-form law: F_kappa plus a sum of independent exponentials
# with rates kappa, ..., n-1. Its first two moments follow directly.

# %%
mean, second = alg_moments(costs)
print(f"E[ALG] = {mean:.6f}, sd = {np.sqrt(second - mean**2):.6f}")

# %% [markdown]
# Cheap facilities push kappa up to n; then ALG opens every vertex and its
# cost is the constant F_n.

# %%
for f in (0.05, 0.2, 0.5, 2.0):
    print(f, kappa(CostProfile.equal(f, 12)).kappa)
