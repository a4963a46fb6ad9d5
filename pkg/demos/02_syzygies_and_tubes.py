# %% [markdown]
# Syzygies, stable endomorphisms and the periodic part of the stable category.

# %%
from dihedral_udr.algebra import catalog_algebra
from dihedral_udr.homological import ext1_dim, omega, omega_orbit, stable_end_dim
from dihedral_udr.rep import is_isomorphic, simple
from dihedral_udr.strings import band_module, string_module

p = 5

# %%
# Omega of the simple module of the local algebra is its radical, and keeps growing.
a = catalog_algebra("D(1)_0", p)
s = simple(a, "0")
print("dim Omega^i(S):", [omega(s, i).dim for i in range(6)])
print("Ext^1(S, S) =", ext1_dim(s, s))

# %%
# On band modules Omega moves the parameter: mu -> -mu here.
for mu in range(1, p):
    image = omega(band_module(a, mu))
    hit = [nu for nu in range(1, p) if is_isomorphic(image, band_module(a, nu))]
    print(f"Omega(M(B, {mu}, 1)) = M(B, {hit[0]}, 1)")

# %%
# D(3K): the three simples lie in one non-periodic component, the 3-tubes elsewhere.
k = catalog_algebra("D(3K)", p)
for u in k.vertices:
    orb = omega_orbit(simple(k, u), max_steps=8)
    print(f"S{u}: stable End {stable_end_dim(simple(k, u))}, orbit open: {orb.is_open},"
          f" dims {[t.dim for t in orb.terms]}")
for w in ("gamma", "lambda", "beta", "kappa"):
    orb = omega_orbit(string_module(k, w))
    print(f"M({w}): period {orb.period}")

# %%
# D(3A)_1 behaves differently: S0 and S2 are Omega-periodic of period 3.
d = catalog_algebra("D(3A)_1", p)
for u in d.vertices:
    orb = omega_orbit(simple(d, u), max_steps=8)
    print(f"S{u}: period {orb.period}, open {orb.is_open}")

# %%
# Inside a 3-tube of D(2A)_0 the stable endomorphism ring is bigger than k.
b = catalog_algebra("D(2A)_0", p)
for w in ("alpha^-1", "alpha^-1*gamma", "alpha^-1*gamma*beta*alpha^-1"):
    print(f"{w:<32} stable End dim {stable_end_dim(string_module(b, w))}")
print("boundary S1:", stable_end_dim(simple(b, "1")))
