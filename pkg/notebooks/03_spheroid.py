# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Tracking a drifting spheroid on a lattice
#
# A bump of activity random-walks over a 3-D lattice of noisy sensors.  At
# every sample each detector names one lattice point; we count how often it
# names the true centre, or the centre or one of its six neighbours.
#
# The full run uses a 10x10x10 lattice, 1000 samples and 20 seeds per
# amplitude (about 12 minutes).  A 6x6x6 lattice with shorter traces shows the
# same ordering in seconds.

# %%
from graphvariate.experiments import GridWorld, spheroid_experiment
from graphvariate.experiments.spheroid import REFERENCE_RATES

world = GridWorld((6, 6, 6))
report = spheroid_experiment(deltas=(0.3, 0.5, 0.7), replicates=2, length=300, world=world)

# %%
print(f"{'detector':22s} {'centre %':>9s} {'any %':>7s}")
for name, (centre, anyhit) in report.overall().items():
    print(f"{name:22s} {centre:9.1f} {anyhit:7.1f}")

# %% [markdown]
# The clustering coefficient of the pair-average network pools evidence from
# every triangle around a node, so it names the centre more often than the raw
# maximum.  The Laplacian detectors respond to local contrast rather than level
# and stay close to chance.  On a small lattice the heat kernels are pulled
# towards the boundary, which is why they also do poorly here.
#
# Reference rates for the full-size run:

# %%
for name, (centre, anyhit) in REFERENCE_RATES.items():
    print(f"{name:10s} {centre:5.1f} {anyhit:5.1f}")
