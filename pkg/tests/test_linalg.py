import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dihedral_udr import linalg
from dihedral_udr.linalg import PrimeField, TruncPoly


def matrices(p=5, max_dim=8):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c).map(
                lambda xs: np.array(xs, dtype=np.int64).reshape(r, c)
            )
        )
    )


def test_prime_field_rejects_composites():
    with pytest.raises(ValueError):
        PrimeField(6)
    f = PrimeField(13)
    assert f.inv(5) * 5 % 13 == 1
    assert sorted(f.sqrt_solutions(12)) == [5, 8]
    assert not PrimeField(3).is_square(2)


def test_rref_identity_and_zero():
    r, piv, k = linalg.rref(np.eye(2, dtype=np.int64), 5)
    assert np.array_equal(r, np.eye(2)) and piv == [0, 1] and k == 2
    r, piv, k = linalg.rref(np.zeros((3, 4), dtype=np.int64), 5)
    assert not r.any() and piv == [] and k == 0


def test_rank_of_dependent_rows():
    assert linalg.rank([[1, 2], [2, 4]], 5) == 1


def test_kernel_examples():
    assert linalg.kernel_basis(np.eye(3, dtype=np.int64), 5) == []
    assert len(linalg.kernel_basis(np.zeros((2, 3), dtype=np.int64), 5)) == 3
    (v,) = linalg.kernel_basis([[1, 2], [2, 4]], 5)
    assert (v[0] + 2 * v[1]) % 5 == 0 and v.any()


def test_solve_affine_examples():
    x, ker = linalg.solve_affine(np.eye(3, dtype=np.int64), [1, 2, 3], 5)
    assert list(x) == [1, 2, 3] and ker == []
    assert linalg.solve_affine(np.zeros((2, 2), dtype=np.int64), [1, 0], 5) is None
    assert linalg.solve_affine([[1, 2], [2, 4]], [1, 2], 5) is not None
    assert linalg.solve_affine([[1, 2], [2, 4]], [1, 1], 5) is None


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    assert linalg.rank(m, 5) + len(linalg.kernel_basis(m, 5)) == m.shape[1]
    for v in linalg.kernel_basis(m, 5):
        assert not (m @ v % 5).any()


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_idempotent(m):
    r, _, _ = linalg.rref(m, 5)
    r2, _, _ = linalg.rref(r, 5)
    assert np.array_equal(r, r2)


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_affine_solutions_are_exact(m, data):
    b = np.array(data.draw(st.lists(st.integers(0, 4), min_size=m.shape[0], max_size=m.shape[0])))
    sol = linalg.solve_affine(m, b, 5)
    if sol is None:
        # then b is outside the column span
        assert linalg.rank(np.hstack([m, b.reshape(-1, 1)]), 5) > linalg.rank(m, 5)
    else:
        x, _ = sol
        assert np.array_equal(m @ x % 5, b % 5)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.lists(st.integers(0, 4), min_size=4 * 25, max_size=4 * 25))
def test_batched_full_rank_agrees_with_rank(n, xs):
    stack = np.array(xs[: 4 * n * n], dtype=np.int64).reshape(4, n, n)
    mask = linalg.batched_full_rank(stack, 5)
    assert list(mask) == [linalg.rank(s, 5) == n for s in stack]


polys = st.lists(st.integers(0, 6), min_size=5, max_size=5).map(lambda c: TruncPoly.make(c, 7))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_trunc_poly_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    for m in (1, 3, 5):
        assert (a * b).reduce(m) == a.reduce(m) * b.reduce(m)


def test_trunc_poly_truncates():
    t = TruncPoly.make([0, 1], 5, order=3)
    assert (t * t).coeffs == (0, 0, 1)
    assert (t * t * t).is_zero()
    assert not t.is_unit()


def test_poly_matmul_matches_scalar_polys():
    a = np.array([[[1]], [[2]]])  # 1 + 2t
    b = np.array([[[3]], [[0]], [[1]]])  # 3 + t^2
    full = linalg.poly_matmul(a, b, 7)
    assert [int(x[0, 0]) for x in full] == [3, 6, 1, 2]
    assert linalg.poly_matmul(a, b, 7, order=2).shape[0] == 2
