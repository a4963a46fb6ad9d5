# %% [markdown]
# Which band modules have stable End k, and what the census says about finiteness.

# %%
from collections import Counter

from dihedral_udr.algebra import catalog_algebra
from dihedral_udr.homological import stable_end_dim
from dihedral_udr.quiver import CATALOG_NAMES
from dihedral_udr.strings import band_module
from dihedral_udr.workbench import census, census_csv, finite_dimensional_flag

p = 13

# %%
# Over F_13 the split three-vertex algebras lose exactly two parameters each.
for name in CATALOG_NAMES:
    if name in ("D(1)_1", "D(2A)_1"):
        continue
    a = catalog_algebra(name, p)
    bad = [mu for mu in range(1, p) if stable_end_dim(band_module(a, mu)) != 1]
    print(f"{name:<12} excluded mu: {bad}")

# %%
# One census, as CSV.
rows = census("D(3Q)", 5, max_len=3)
print(census_csv(rows))
print(Counter(r.verdict for r in rows))

# %%
# Characteristic 2: is every deformation ring that shows up finite-dimensional?
for name in CATALOG_NAMES:
    print(f"{name:<12} {finite_dimensional_flag(census(name, 2, max_len=6))}")
