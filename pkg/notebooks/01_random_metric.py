# %% [markdown]
# # Random shortest path metrics
#
# Every edge of the complete graph on n vertices gets an independent Exp(1)
# weight. The distance between two vertices is the length of the lightest
# path joining them, so a heavy direct edge is often bypassed.

# %%
import numpy as np

from rspfl import build_metric, sample_edge_weights, validate_metric

rng = np.random.default_rng(7)
w = sample_edge_weights(6, rng)
m = build_metric(w)
print(np.round(w.matrix(), 3))
print(np.round(m.d, 3))

# %% [markdown]
# Distances never exceed the direct edge weight, and the result is a metric.

# %%
print("dominated by edges:", bool(np.all(m.d <= w.matrix())))
print("axiom violations:", validate_metric(m))

# %% [markdown]
# How much shorter do distances get as n grows? The mean distance shrinks
# roughly like ln(n)/n, while the mean edge weight stays at 1.

# %%
for n in (10, 40, 160):
    d = build_metric(sample_edge_weights(n, rng)).d
    mean_d = d[np.triu_indices(n, 1)].mean()
    print(f"n={n:4d}  mean distance {mean_d:.4f}  ln(n)/n {np.log(n) / n:.4f}")
