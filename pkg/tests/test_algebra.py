import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dihedral_udr import linalg
from dihedral_udr.algebra import (
    NoStabilizationError,
    build_algebra,
    catalog_algebra,
    forbidden_subpaths,
    projective,
    radical,
    radical_powers,
    regular_module,
    socle,
)
from dihedral_udr.quiver import CATALOG_NAMES, catalog, parse_presentation

from oracles import path_congruence_dim

# Frozen from the path-congruence oracle (tests/oracles.py), max_len 8 and 10 agree.
ORACLE_DIM = {
    "D(1)_0": 4,
    "D(1)_1": 4,
    "D(2A)_0": 10,
    "D(2A)_1": 10,
    "D(3A)_1": 18,
    "D(3A)_2": 18,
    "D(3B)_{2,1}": 15,
    "D(3B)_{2,2}": 15,
    "D(3D)_2": 12,
    "D(3K)": 12,
    "D(3L)": 22,
    "D(3Q)": 14,
}

PROJECTIVE_DIMS = {
    "D(1)_0": [4],
    "D(2A)_0": [6, 4],
    "D(3A)_1": [5, 8, 5],
    "D(3B)_{2,1}": [4, 6, 5],
    "D(3B)_{2,2}": [6, 6, 3],
    "D(3D)_2": [4, 4, 4],
    "D(3K)": [4, 4, 4],
    "D(3L)": [8, 7, 7],
    "D(3Q)": [5, 5, 4],
}


def prime_for(name):
    return 2 if name in ("D(1)_1", "D(2A)_1") else 5


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_dimension_matches_oracle(name):
    a = catalog_algebra(name, prime_for(name))
    assert a.dim == ORACLE_DIM[name]


@pytest.mark.parametrize("name", ["D(1)_0", "D(2A)_0", "D(3K)", "D(3Q)"])
def test_live_oracle(name):
    assert path_congruence_dim(catalog(name), max_len=9) == ORACLE_DIM[name]


def test_local_basis():
    a = catalog_algebra("D(1)_0", 5)
    assert [b.text() for b in a.basis] == ["e_0", "alpha", "beta", "alpha*beta"]


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_structure(name):
    p = prime_for(name)
    a = catalog_algebra(name, p)
    n = len(a.vertices)
    assert sum(len(a.peirce(u, v)) for u in a.vertices for v in a.vertices) == a.dim
    assert a.check_associative()
    assert a.symmetric_form() is not None
    assert socle(a).dim == n
    powers = radical_powers(a)
    assert powers[0] == a.dim - n and powers[-1] == 0 and len(powers) <= a.dim
    # no relation has length one, so each arrow survives in rad/rad^2
    assert powers[0] - powers[1] == len(a.quiver.arrows)
    assert sum(projective(a, u).dim for u in a.vertices) == a.dim
    assert regular_module(a).dim == a.dim


@pytest.mark.parametrize("name", PROJECTIVE_DIMS)
def test_projective_dims(name):
    a = catalog_algebra(name, 5)
    assert [projective(a, u).dim for u in a.vertices] == PROJECTIVE_DIMS[name]


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_projective_socles_are_simple_and_lie_in_the_radical(name):
    a = catalog_algebra(name, prime_for(name))
    rad = radical(a)
    for v in socle(a).vectors:
        assert rad.contains(v)
    for u in a.vertices:
        pu = projective(a, u)
        labels, big = pu.flat()
        # the socle of a module is the common kernel of all arrow actions
        soc = linalg.kernel_basis(np.vstack(list(big.values())), a.p)
        assert len(soc) == 1
        assert {labels[i] for i in np.flatnonzero(soc[0])} == {u}


def test_local_radical_and_socle():
    a = catalog_algebra("D(1)_0", 5)
    assert radical(a).dim == 3
    s = socle(a)
    assert s.dim == 1 and s.contains(a.element(["alpha", "beta"]))
    assert projective(a, "0").dim == 4
    assert {q.text() for q in forbidden_subpaths(a)} >= {"alpha*alpha", "beta*beta", "alpha*beta", "beta*alpha"}


def test_two_vertex_forbidden_contains_relation():
    a = catalog_algebra("D(2A)_0", 5)
    assert "beta*gamma" in {q.text() for q in forbidden_subpaths(a)}
    assert radical_powers(a)[0] - radical_powers(a)[1] == 3


def test_dimension_does_not_depend_on_odd_prime():
    for name in ("D(3A)_1", "D(3L)", "D(3Q)"):
        assert {catalog_algebra(name, p).dim for p in (3, 5, 13)} == {ORACLE_DIM[name]}


def test_non_stabilizing_presentation_is_rejected():
    free = parse_presentation('algebra "free"\nchar any\nvertex 0\narrow a 0 0\nrelations\n')
    with pytest.raises(NoStabilizationError):
        build_algebra(free, 5, length_cap=6)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["D(2A)_0", "D(3K)", "D(3L)"]), st.data())
def test_multiplication_is_associative_on_random_elements(name, data):
    a = catalog_algebra(name, 5)
    vec = st.lists(st.integers(0, 4), min_size=a.dim, max_size=a.dim).map(np.array)
    x, y, z = data.draw(vec), data.draw(vec), data.draw(vec)
    assert np.array_equal(a.product(a.product(x, y), z), a.product(x, a.product(y, z)))
    assert np.array_equal(a.product(a.one(), x) % 5, x % 5)
    f = FORMS[name]
    assert a.product(x, y) @ f % 5 == a.product(y, x) @ f % 5


FORMS = {n: catalog_algebra(n, 5).symmetric_form() for n in ("D(2A)_0", "D(3K)", "D(3L)")}


@pytest.mark.parametrize("name", list(FORMS))
def test_symmetric_form_is_nondegenerate(name):
    a = catalog_algebra(name, 5)
    gram = np.einsum("ijk,k->ij", a.mult, FORMS[name]) % 5
    assert linalg.rank(gram, 5) == a.dim and np.array_equal(gram, gram.T)
