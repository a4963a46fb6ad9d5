"""Exact linear algebra over a prime field F_p.

Matrices are plain ``numpy`` integer arrays whose entries are kept reduced
into ``[0, p)``.  Every routine takes the modulus explicitly so the same array
can be reinterpreted over another prime without copying.  Pivoting is always
"first nonzero entry, scanning columns left to right and rows top to bottom",
which makes every result bit-reproducible.

The module also carries the truncated polynomial ring F_p[t]/(t^n) used by the
deformation code, both as a scalar type (:class:`TruncPoly`) and as stacks of
coefficient matrices (arrays of shape ``(n, rows, cols)``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Products of two reduced entries must fit in int64.
MAX_PRIME = 2**31 - 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_p.

    Elements are Python ints in ``[0, p)``; arrays are ``int64`` numpy arrays.
    """

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, (int, np.integer)) or not is_prime(int(self.p)):
            raise ValueError(f"modulus must be prime, got {self.p!r}")
        if self.p > MAX_PRIME:
            raise ValueError(f"modulus {self.p} exceeds {MAX_PRIME}")

    def __call__(self, x: int) -> int:
        return int(x) % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return pow(int(a), -1, self.p)

    def elements(self) -> range:
        return range(self.p)

    def units(self) -> range:
        return range(1, self.p)

    def is_square(self, a: int) -> bool:
        a %= self.p
        return a == 0 or any((x * x) % self.p == a for x in range(1, self.p))

    def sqrt_solutions(self, a: int) -> list[int]:
        """All x in F_p with x^2 = a."""
        a %= self.p
        return [x for x in range(self.p) if (x * x) % self.p == a]

    def array(self, data, shape: Sequence[int] | None = None) -> np.ndarray:
        arr = np.array(data, dtype=np.int64)
        if shape is not None:
            arr = arr.reshape(shape)
        return arr % self.p

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)


def as_matrix(m, p: int) -> np.ndarray:
    arr = np.array(m, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
    return arr % p


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Matrix product mod p.

    A single reduction at the end is exact while ``inner * (p-1)**2`` fits in
    int64; larger products fall back to accumulating rank-one updates.
    """
    if a.shape[1] * (p - 1) ** 2 >= 2**62:
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for k in range(a.shape[1]):
            out = (out + np.outer(a[:, k], b[k, :])) % p
        return out
    return (a @ b) % p


def chain(mats: Iterable[np.ndarray], p: int) -> np.ndarray:
    """Ordered product ``m1 @ m2 @ ... @ mk`` mod p."""
    it = iter(mats)
    out = next(it)
    for m in it:
        out = matmul(out, m, p)
    return out


def rref(m, p: int) -> tuple[np.ndarray, list[int], int]:
    """Reduced row echelon form over F_p.

    Returns:
        ``(R, pivots, rank)`` where ``pivots`` lists the pivot column indices in
        increasing order and ``rank == len(pivots)``.
    """
    a = as_matrix(m, p).copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots, len(pivots)


def rank(m, p: int) -> int:
    a = as_matrix(m, p)
    if a.size == 0:
        return 0
    return rref(a, p)[2]


def _kernel_from_rref(r: np.ndarray, pivots: list[int], cols: int, p: int) -> list[np.ndarray]:
    pivot_set = set(pivots)
    basis = []
    for f in range(cols):
        if f in pivot_set:
            continue
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-r[i, f]) % p
        basis.append(v)
    return basis


def kernel_basis(m, p: int) -> list[np.ndarray]:
    """Basis of ``{v : m v = 0}``, one vector per free column of the RREF."""
    a = np.array(m, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("kernel_basis expects a 2-D matrix")
    cols = a.shape[1]
    if a.shape[0] == 0:
        return [np.eye(cols, dtype=np.int64)[i] for i in range(cols)]
    r, pivots, _ = rref(a, p)
    return _kernel_from_rref(r, pivots, cols, p)


def solve_affine(m, b, p: int) -> tuple[np.ndarray, list[np.ndarray]] | None:
    """Solve ``m x = b`` over F_p.

    Returns ``None`` when ``b`` is outside the column span, otherwise a
    particular solution (free variables set to zero) and a kernel basis.
    """
    a = np.array(m, dtype=np.int64) % p
    rhs = np.array(b, dtype=np.int64).reshape(-1) % p
    rows, cols = a.shape
    if rhs.shape[0] != rows:
        raise ValueError(f"right-hand side has length {rhs.shape[0]}, expected {rows}")
    if rows == 0:
        return np.zeros(cols, dtype=np.int64), kernel_basis(a, p)
    aug = np.concatenate([a, rhs.reshape(-1, 1)], axis=1)
    r, pivots, _ = rref(aug, p)
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = r[i, cols]
    return x, _kernel_from_rref(r[:, :cols], pivots, cols, p)


def row_basis(vectors, p: int, width: int | None = None) -> np.ndarray:
    """RREF rows spanning the given vectors (zero rows dropped)."""
    vecs = list(vectors)
    if not vecs:
        return np.zeros((0, width or 0), dtype=np.int64)
    r, _, k = rref(np.array(vecs, dtype=np.int64), p)
    return r[:k]


def independent_subset(vectors: Sequence[np.ndarray], p: int) -> list[int]:
    """Indices of the first maximal linearly independent subfamily."""
    if not vectors:
        return []
    a = np.array(vectors, dtype=np.int64).T % p
    return rref(a, p)[1]


def in_span(v: np.ndarray, rows: np.ndarray, p: int) -> bool:
    if rows.shape[0] == 0:
        return not np.any(np.asarray(v) % p)
    return rank(np.vstack([rows, v]), p) == rank(rows, p)


def coordinates(v: np.ndarray, basis_cols: np.ndarray, p: int) -> np.ndarray:
    """Coordinates of ``v`` in the columns of ``basis_cols`` (must be in span)."""
    sol = solve_affine(basis_cols, v, p)
    if sol is None:
        raise ValueError("vector is not in the span of the given basis")
    return sol[0]


def is_invertible(m: np.ndarray, p: int) -> bool:
    return m.shape[0] == m.shape[1] and rank(m, p) == m.shape[0]


def batched_full_rank(stack: np.ndarray, p: int) -> np.ndarray:
    """Boolean mask of which square matrices in ``stack`` are invertible mod p.

    ``stack`` has shape ``(batch, n, n)``; elimination runs on all matrices at
    once.
    """
    a = np.array(stack, dtype=np.int64) % p
    batch, n, _ = a.shape
    ok = np.ones(batch, dtype=bool)
    idx = np.arange(batch)
    for c in range(n):
        sub = a[:, c:, c]
        has = sub != 0
        any_nz = has.any(axis=1)
        ok &= any_nz
        piv = c + np.argmax(has, axis=1)
        rows_c = a[idx, c].copy()
        a[idx, c] = a[idx, piv]
        a[idx, piv] = rows_c
        pv = a[:, c, c]
        inv = np.array([pow(int(x), -1, p) if x else 0 for x in pv], dtype=np.int64)
        a[:, c] = (a[:, c] * inv[:, None]) % p
        factors = a[:, c + 1 :, c].copy()
        a[:, c + 1 :] = (a[:, c + 1 :] - factors[:, :, None] * a[:, c][:, None, :]) % p
    return ok


# ---------------------------------------------------------------------------
# F_p[t]/(t^n)


@dataclass(frozen=True)
class TruncPoly:
    """An element of F_p[t]/(t^n), stored by its coefficients of t^0..t^(n-1)."""

    coeffs: tuple[int, ...]
    p: int

    @classmethod
    def make(cls, coeffs: Iterable[int], p: int, order: int | None = None) -> "TruncPoly":
        cs = [int(c) % p for c in coeffs]
        if order is not None:
            cs = (cs + [0] * order)[:order]
        if not cs:
            raise ValueError("truncation order must be at least 1")
        return cls(tuple(cs), p)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def _check(self, other: "TruncPoly") -> None:
        if other.p != self.p or other.order != self.order:
            raise ValueError("operands live in different truncated rings")

    def __add__(self, other: "TruncPoly") -> "TruncPoly":
        self._check(other)
        return TruncPoly(tuple((a + b) % self.p for a, b in zip(self.coeffs, other.coeffs)), self.p)

    def __neg__(self) -> "TruncPoly":
        return TruncPoly(tuple((-a) % self.p for a in self.coeffs), self.p)

    def __sub__(self, other: "TruncPoly") -> "TruncPoly":
        return self + (-other)

    def __mul__(self, other: "TruncPoly") -> "TruncPoly":
        self._check(other)
        n = self.order
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(n - i):
                    out[i + j] = (out[i + j] + a * other.coeffs[j]) % self.p
        return TruncPoly(tuple(out), self.p)

    def reduce(self, m: int) -> "TruncPoly":
        """Image in F_p[t]/(t^m) for ``m <= order``."""
        if not 1 <= m <= self.order:
            raise ValueError(f"cannot reduce order {self.order} to {m}")
        return TruncPoly(self.coeffs[:m], self.p)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return self.coeffs[0] != 0


def poly_matmul(a: np.ndarray, b: np.ndarray, p: int, order: int | None = None) -> np.ndarray:
    """Product of matrices over F_p[t]/(t^order).

    ``a`` has shape ``(n_a, r, k)`` and ``b`` shape ``(n_b, k, c)``; entry
    ``[d]`` is the coefficient matrix of ``t^d``.  Without ``order`` the full
    polynomial product (degree ``n_a + n_b - 2``) is returned.
    """
    na, nb = a.shape[0], b.shape[0]
    n = order if order is not None else na + nb - 1
    out = np.zeros((n, a.shape[1], b.shape[2]), dtype=np.int64)
    for i in range(min(na, n)):
        if not a[i].any():
            continue
        for j in range(min(nb, n - i)):
            if b[j].any():
                out[i + j] = (out[i + j] + a[i] @ b[j]) % p
    return out


def poly_chain(mats: Sequence[np.ndarray], p: int, order: int | None = None) -> np.ndarray:
    out = mats[0] if order is None else mats[0][:order]
    for m in mats[1:]:
        out = poly_matmul(out, m, p, order)
    return out
