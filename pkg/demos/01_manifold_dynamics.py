# %% [markdown]
# # Manifold dynamics
#
# An excited two-level atom meets a coherent field. The coupling only links
# |e, n+1> with |g, n>, so every manifold evolves on its own and keeps the
# Poisson weight it started with. Here we look at one manifold, then check the
# closed form against a brute-force RK4 run.

# %%
import numpy as np

from djcm import DeformationKind, ModelParams, amplitude_excited, amplitude_ground, manifold_frequencies
from djcm.oracle import OdeSettings, propagate_manifold

params = ModelParams(g=0.5, omega=1.0, w1=100.0, w2=100.0, beta=2.0, deformation=DeformationKind.sin())
fr = manifold_frequencies(params, 3)
print("manifold 3: h =", fr.h, " D =", fr.D)

# %% [markdown]
# The excited and ground amplitudes trade population, and their sum stays
# fixed.

# %%
t = np.linspace(0, 10, 6)
c2 = amplitude_excited(params, 3, t)
c1 = amplitude_ground(params, 3, t)
for ti, a, b in zip(t, np.abs(c2) ** 2, np.abs(c1) ** 2):
    print(f"t={ti:4.1f}  |C2|^2={a:.6f}  |C1|^2={b:.6f}  sum={a + b:.12f}")

# %% [markdown]
# Same manifold from RK4.

# %%
traj = propagate_manifold(params, 3, OdeSettings(t_end=10.0, dt=1e-3), sample_every=2000)
print("max |RK4 - closed form| =", np.max(np.abs(traj.c2 - amplitude_excited(params, 3, traj.t))))

# %% [markdown]
# The deformation changes how fast each manifold oscillates.

# %%
for kind in (DeformationKind.identity(), DeformationKind.sin(), DeformationKind.invsin(), DeformationKind.ln()):
    p = params.replace(deformation=kind)
    print(f"{kind.token:8s}", np.round(np.abs(amplitude_ground(p, np.arange(6), 1.0)) ** 2, 4))
