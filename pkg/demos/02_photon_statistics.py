# %% [markdown]
# # Photon statistics
#
# Moments of the reduced field give the Mandel parameter, the antibunching
# witness and the quadrature squeezing.

# %%
import numpy as np

from djcm import DeformationKind, ModelParams, evolve, level_occupation, photon_number_dist, witness_record

base = ModelParams(g=0.5, omega=1.0, w1=100.0, w2=100.0, beta=2.0)

# %% [markdown]
# At t = 0 the excited branch sits one level above the coherent input, which
# already makes the light sub-Poissonian: Q = -0.2.

# %%
print(witness_record(evolve(base, 0.0)))

# %%
for kind in (DeformationKind.sin(), DeformationKind.invsin(), DeformationKind.ln()):
    p = base.replace(deformation=kind)
    q = [witness_record(evolve(p, t)).q_mandel for t in np.linspace(0, 10, 101)]
    print(f"{kind.token:7s} Q in [{min(q):+.4f}, {max(q):+.4f}]")

# %% [markdown]
# The manifold weight p(n) never changes. The actual Fock occupation does.

# %%
for t in (0.0, 1.0, 5.0):
    s = evolve(base, t)
    print(f"t={t}: p(5)={photon_number_dist(s, 5):.5f}  <5|rho|5>={level_occupation(s)[5]:.5f}")
