# %% [markdown]
# # Wigner and Husimi functions
#
# Both are evaluated on a grid. Rows are spread over threads (DJCM_THREADS
# sets how many), and each node gives the same value however the rows are
# split.

# %%
import numpy as np

from djcm import GridSpec, ModelParams, eval_grid, evolve

state = evolve(ModelParams(g=0.5, omega=1.0, w1=100.0, w2=100.0, beta=2.0), 1.0)
spec = GridSpec(-6, 6, -6, 6, 121, 121)

W = eval_grid(state, spec, "wigner")
Q = eval_grid(state, spec, "husimi")
print("integral W =", W.integral, " min W =", W.values.min())
print("integral Q =", Q.integral, " min Q =", Q.values.min())

# %% [markdown]
# Negative Wigner values mark nonclassical light. Dropping the Fock
# coherences gives a rotation-invariant picture with different negativity.

# %%
D = eval_grid(state, spec, "wigner", terms="diagonal")
print("min W (diagonal only) =", D.values.min())
print(W.to_csv().splitlines()[:2])
