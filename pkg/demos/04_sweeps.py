# %% [markdown]
# # Sweeps and the command line
#
# `run_sweep` evaluates witnesses along one axis for several deformations. The
# `djcm figures` command writes the leading panel of each figure this way.

# %%
from djcm import SweepSpec, figure_panels, run_sweep

spec = SweepSpec(axis="omega_field", start=0.1, stop=5.0, count=6, witnesses=("mandel", "squeeze"))
print(run_sweep(spec).to_csv())

# %%
print(sorted(figure_panels()))

# %% [markdown]
# The same from a shell:
#
# ```
# djcm sweep --axis omega_field --start 0.1 --stop 5 --count 6 --witness mandel,squeeze
# djcm figures --outdir out/
# djcm validate --f invsin
# ```
