"""Hom spaces, maps through projectives, syzygies and Ext^1.

Maps factoring through a projective are computed through the projective
cover ``pi: P(N) -> N``: every such map ``M -> N`` lifts along ``pi``, so the
subspace is the image of ``Hom(M, P(N))`` under composition with ``pi``.
The definition through the regular module is available as
:func:`projective_maps_via_regular` and is used in the tests as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import projective, regular_module
from .rep import Rep, RepMap, direct_sum, intertwiners, is_isomorphic, subrep, top_and_radical, zero_rep


@dataclass(frozen=True)
class HomBasis:
    source: Rep
    target: Rep
    basis: list[RepMap]
    projective_subspace: np.ndarray  # RREF rows, in map_from_vector coordinates

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def stable_dim(self) -> int:
        return self.dim - self.projective_subspace.shape[0]


@dataclass(frozen=True)
class SyzygyResult:
    omega: Rep
    cover: Rep
    cover_map: RepMap
    inclusion: RepMap
    top: dict = field(default_factory=dict)


def _span_rows(maps: list[RepMap], p: int, width: int) -> np.ndarray:
    return linalg.row_basis([f.vector() for f in maps], p, width)


def projective_cover(n: Rep) -> tuple[Rep, RepMap, dict]:
    """Projective cover ``P -> n`` built from top representatives.

    A summand ``P_u`` is attached to each chosen top vector ``t`` at ``u``; the
    basis element ``b`` of ``P_u`` goes to ``b . t``.
    """
    a = n.algebra
    p = a.p
    tr = top_and_radical(n)
    pieces = []
    for u in a.vertices:
        for k in range(tr.top[u]):
            pieces.append((u, tr.top_vectors[u][:, k]))
    if not pieces:
        return zero_rep(a), RepMap(zero_rep(a), n, {v: np.zeros((n.dims[v], 0), dtype=np.int64) for v in a.vertices}), tr.top
    cover = None
    cols: dict[str, list[np.ndarray]] = {v: [] for v in a.vertices}
    for u, t in pieces:
        pu = projective(a, u)
        cover = pu if cover is None else direct_sum(cover, pu)
        for v in a.vertices:
            for idx in a.peirce(u, v):
                cols[v].append(linalg.matmul(n.path_matrix(a.basis[idx]), t.reshape(-1, 1), p).reshape(-1))
    blocks = {
        v: (np.array(cols[v], dtype=np.int64).T.reshape(n.dims[v], len(cols[v])) if cols[v] else np.zeros((n.dims[v], 0), dtype=np.int64))
        for v in a.vertices
    }
    return cover, RepMap(cover, n, blocks), tr.top


def projective_maps(m: Rep, n: Rep) -> np.ndarray:
    """RREF rows spanning the maps ``m -> n`` that factor through a projective."""
    p = m.p
    width = sum(m.dims[v] * n.dims[v] for v in m.algebra.vertices)
    cover, pi, _ = projective_cover(n)
    if cover.dim == 0:
        return np.zeros((0, width), dtype=np.int64)
    lifts = intertwiners(m, cover)
    return _span_rows([pi.compose(h) for h in lifts], p, width)


def projective_maps_via_regular(m: Rep, n: Rep) -> np.ndarray:
    """Same subspace as :func:`projective_maps`, through the regular module."""
    p = m.p
    width = sum(m.dims[v] * n.dims[v] for v in m.algebra.vertices)
    lam = regular_module(m.algebra)
    ins = intertwiners(m, lam)
    outs = intertwiners(lam, n)
    return _span_rows([g.compose(h) for h in ins for g in outs], p, width)


def hom_space(m: Rep, n: Rep) -> HomBasis:
    return HomBasis(m, n, intertwiners(m, n), projective_maps(m, n))


def stable_hom_dim(m: Rep, n: Rep) -> int:
    return hom_space(m, n).stable_dim


def stable_end_dim(v: Rep) -> int:
    """dim End(v) minus the endomorphisms factoring through projectives."""
    return stable_hom_dim(v, v)


def syzygy(v: Rep) -> SyzygyResult:
    """Kernel of the projective cover of ``v``."""
    a = v.algebra
    p = a.p
    cover, pi, top = projective_cover(v)
    bases = {}
    for u in a.vertices:
        block = pi.blocks[u]
        if cover.dims[u] == 0:
            bases[u] = np.zeros((0, 0), dtype=np.int64)
            continue
        ker = linalg.kernel_basis(block, p) if block.shape[0] else [np.eye(cover.dims[u], dtype=np.int64)[i] for i in range(cover.dims[u])]
        bases[u] = np.array(ker, dtype=np.int64).T.reshape(cover.dims[u], len(ker))
    omega = subrep(cover, bases)
    omega.meta["kind"] = "syzygy"
    inc = RepMap(omega, cover, {u: bases[u] for u in a.vertices})
    return SyzygyResult(omega, cover, pi, inc, top)


def omega(v: Rep, times: int = 1) -> Rep:
    for _ in range(times):
        v = syzygy(v).omega
    return v


def ext1_dim(m: Rep, n: Rep) -> int:
    """dim Ext^1(m, n), computed as the stable Hom from Omega(m) to n."""
    return stable_hom_dim(omega(m), n)


@dataclass(frozen=True)
class OrbitResult:
    terms: list[Rep]
    period: int | None  # None when no repeat was found
    reached_zero: bool = False

    @property
    def is_open(self) -> bool:
        return self.period is None and not self.reached_zero


def omega_orbit(v: Rep, max_steps: int = 12) -> OrbitResult:
    """Iterate Omega until a term is isomorphic to an earlier one.

    ``terms`` holds the distinct iterates; ``period`` is the cycle length when
    ``Omega^k(v)`` returns to an earlier term.  An iterate whose isomorphism
    test is inconclusive is treated as new.
    """
    terms = [v]
    cur = v
    for _ in range(max_steps):
        cur = omega(cur)
        if cur.dim == 0:
            return OrbitResult(terms, None, reached_zero=True)
        for i, old in enumerate(terms):
            if old.dims == cur.dims and is_isomorphic(old, cur).answer == "yes":
                return OrbitResult(terms, len(terms) - i)
        terms.append(cur)
    return OrbitResult(terms, None)
