# %% [markdown]
# Lifting modules over F_p[t]/(t^n) and reading off the deformation ring.

# %%
import numpy as np

from dihedral_udr.algebra import catalog_algebra
from dihedral_udr.deformation import (
    LiftOrderN,
    classify_defring,
    extend_lift,
    first_order,
    vector_to_arrows,
    verify_poly_lift,
)
from dihedral_udr.rep import simple
from dihedral_udr.strings import band_module, string_module

p = 5

# %%
# S0 over D(2A)_0 has a single first-order deformation, and it does not survive to t^2.
b = catalog_algebra("D(2A)_0", p)
v = simple(b, "0")
space = first_order(v)
print("cocycles", len(space.cocycles), "coboundaries", space.coboundaries.shape[0], "ext1", space.ext1)
d0 = space.class_representatives()[0]
lift = LiftOrderN.first_order(v, vector_to_arrows(v, d0))
res = extend_lift(lift)
print("extends to order 3:", bool(res), "| obstruction at order", res.obstruction.order)
print(classify_defring(v))

# %%
# A 3-tube module of D(3A)_2 has a lift over all of F_p[[t]]; the shipped lift proves it.
a = catalog_algebra("D(3A)_2", p)
t2 = string_module(a, "gamma*delta^-1*eta^-1")
rep = classify_defring(t2)
print(rep.verdict, rep.lift_status, rep.certificate)

# %%
# The band modules of the local algebra deform by moving mu: X_beta = (mu + t) E01.
loc = catalog_algebra("D(1)_0", p)
mu = 2
alpha = np.zeros((1, 2, 2), dtype=np.int64)
alpha[0, 0, 1] = 1
beta = np.zeros((2, 2, 2), dtype=np.int64)
beta[:, 0, 1] = [mu, 1]
cert = verify_poly_lift(band_module(loc, mu), {"alpha": alpha, "beta": beta})
print("first-order direction:", cert.direction)

# %%
# And the local simple module: two-dimensional tangent space, the ring is the algebra itself.
print(classify_defring(simple(loc, "0")))

# %%
# Without a certificate, the order-by-order search still climbs to the cap.
from dihedral_udr import deformation

keep = deformation.find_certificate
deformation.find_certificate = lambda _v: None
try:
    print(classify_defring(band_module(catalog_algebra("D(3K)", p), 3), cap=6))
finally:
    deformation.find_certificate = keep
