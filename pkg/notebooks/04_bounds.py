# %% [markdown]
# # Closed-form bounds
#
# Rational Padé sandwiches bracket alpha^m e^alpha E_m(alpha). They feed into
# bounds on the first two moments of 1/(F + Z)^2 with Z Gamma distributed,
# and those assemble into an upper bound on E[ALG/OPT].

# %%
import numpy as np

from rspfl import CostProfile, moment_bounds, normalized_exp_integral, pade_bounds, theorem2_bound
from rspfl.bounds import opt_lower_tail_bound

for a in (0.1, 1.0, 10.0, 100.0):
    exact = normalized_exp_integral(a, 1)
    p = pade_bounds(a, 1, 2)
    print(f"alpha={a:6.1f}  {p.lower:.6f} <= {exact:.6f} <= {p.upper:.6f}")

# %% [markdown]
# Moment bounds for n = 8 at a few values of F.

# %%
for F in (0.1, 0.5, 2.0):
    b = moment_bounds(8, 2, F)
    print(f"F={F}: E[X] in [{b.exk_lower:.5g}, {b.exk_upper:.5g}], Var <= {b.var_upper:.3g}")

# %% [markdown]
# The assembled bound for cheap equal costs, and the union bound on the lower
# tail of OPT.

# %%
rep = theorem2_bound(CostProfile.equal(0.05, 12))
print(f"E[ALG/OPT] <= {rep.theorem2_value:.4f}  (kappa = {rep.kappa})")
costs = CostProfile.equal(0.3, 10)
for z in np.linspace(0.3, 3.0, 5):
    print(f"P(OPT < {z:.2f}) <= {opt_lower_tail_bound(z, costs):.4f}")
