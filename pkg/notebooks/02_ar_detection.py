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
# # Finding correlated sources in AR(2) noise
#
# Each population member is a set of AR(2) signals in which half the nodes
# share a common source.  For each detection method we compare the
# connectivity of the correlated half with the uncorrelated half and t-test the
# differences across the population.  A small grid is enough to see the
# instantaneous-correlation function pull ahead of the squared difference.

# %%
import numpy as np

from graphvariate.experiments import correlated_source_grid
from graphvariate.experiments.ar import METHODS, dominance_sign_test

sizes = (2, 4, 8, 16)
populations = (5, 15, 25)

# %%
grids = [correlated_source_grid(sizes, populations, seed=0, repetition=r) for r in range(3)]
for method in METHODS:
    share = np.mean([g[method] < 0.05 for g in grids], axis=0)
    print(method)
    print("  pop\\h " + " ".join(f"{h:>5d}" for h in sizes))
    for pop, row in zip(populations, share):
        print(f"  {pop:5d} " + " ".join(f"{v:5.2f}" for v in row))

# %% [markdown]
# ## Which method wins cell by cell?
#
# A sign test over all grid cells and repetitions compares the p-values of two
# methods directly.

# %%
ico = np.stack([g["instantaneous_correlation"] for g in grids])
sqd = np.stack([g["squared_difference"] for g in grids])
wins, losses, p = dominance_sign_test(ico, sqd)
print(f"instantaneous correlation beats squared difference in {wins} cells, loses {losses}; p = {p:.2g}")
