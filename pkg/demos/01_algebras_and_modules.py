# %% [markdown]
# Algebras from presentations, and the string and band modules over them.

# %%
import numpy as np

from dihedral_udr.algebra import catalog_algebra, projective, radical_powers, socle
from dihedral_udr.quiver import catalog
from dihedral_udr.rep import is_isomorphic, top_and_radical, validate
from dihedral_udr.strings import band_module, band_of, enumerate_strings, string_module

p = 5

# %%
# The local algebra: two loops, alpha^2 = beta^2 = 0, alpha*beta = beta*alpha.
print(catalog("D(1)_0").serialize())
a = catalog_algebra("D(1)_0", p)
print("basis:", [b.text() for b in a.basis])
print("multiplication table of alpha (left action):")
print(a.left_mult_matrix(a.arrow_element("alpha")))

# %%
# Dimensions, Loewy lengths, socles across the catalog.
for name in ("D(2A)_0", "D(3A)_1", "D(3K)", "D(3L)", "D(3Q)"):
    b = catalog_algebra(name, p)
    print(f"{name:<12} dim {b.dim:>3}  rad^i dims {radical_powers(b)}  socle {socle(b).dim}"
          f"  projectives {[projective(b, u).dim for u in b.vertices]}")

# %%
# Strings over D(2A)_0.  Composition reads right to left: beta acts first in gamma*beta.
b = catalog_algebra("D(2A)_0", p)
strings = enumerate_strings(b, 4)
print(len(strings), "strings up to length 4:", ", ".join(w.text() for w in strings))

m = string_module(b, "alpha^-1*gamma")
print(m, "valid:", bool(validate(m)))
for name, mat in m.mats.items():
    print(name, mat.tolist())
tr = top_and_radical(m)
print("top:", tr.top, " radical:", tr.radical)

# %%
# Band modules: one per parameter mu, each at the mouth of its own 1-tube.
bdata = band_of(b)
print("band", bdata.band.text(), "over", bdata.domain_text())
mods = {mu: band_module(b, mu) for mu in range(1, p)}
same = np.array([[is_isomorphic(mods[x], mods[y]).answer == "yes" for y in mods] for x in mods])
print("isomorphism pattern between M(B, mu, 1):")
print(same.astype(int))

# mu = 0 is a string module in disguise
print(band_module(b, 0).meta["as_string"])
