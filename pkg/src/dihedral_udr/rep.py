"""Modules over an :class:`~dihedral_udr.algebra.AlgebraTable` as quiver representations.

A :class:`Rep` stores one vector space dimension per vertex and one matrix
per arrow.  The matrix of an arrow ``z: s -> e`` has shape ``(d_e, d_s)`` and
acts on column vectors, so a path ``w1*...*wn`` acts as the product
``X_w1 @ ... @ X_wn``.

When a module is viewed as a single vector space (the "flat" view) the basis
is ordered vertex by vertex, in the quiver's vertex order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping

import numpy as np

from . import linalg
from .quiver import Path, Relation

if TYPE_CHECKING:
    from .algebra import AlgebraTable


class AlgebraMismatchError(ValueError):
    pass


class Rep:
    """A finite-dimensional left module given by arrow matrices."""

    def __init__(
        self,
        algebra: "AlgebraTable",
        dims: Mapping[str, int],
        mats: Mapping[str, np.ndarray],
        meta: Mapping | None = None,
    ):
        self.algebra = algebra
        # free-form provenance, e.g. the string a module was built from
        self.meta = dict(meta or {})
        p = algebra.p
        self.dims = {v: int(dims.get(v, 0)) for v in algebra.vertices}
        extra = set(dims) - set(self.dims)
        if extra:
            raise ValueError(f"unknown vertices in dimension vector: {sorted(extra)}")
        self.mats: dict[str, np.ndarray] = {}
        for arrow in algebra.quiver.arrows:
            shape = (self.dims[arrow.target], self.dims[arrow.source])
            m = mats.get(arrow.name)
            if m is None:
                m = np.zeros(shape, dtype=np.int64)
            m = np.array(m, dtype=np.int64).reshape(shape) % p
            m.setflags(write=False)
            self.mats[arrow.name] = m
        unknown = set(mats) - set(self.mats)
        if unknown:
            raise ValueError(f"unknown arrows: {sorted(unknown)}")

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    @property
    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.algebra.vertices)

    def offsets(self) -> dict[str, int]:
        out, acc = {}, 0
        for v in self.algebra.vertices:
            out[v] = acc
            acc += self.dims[v]
        return out

    def path_matrix(self, path: Path) -> np.ndarray:
        if path.is_trivial:
            return np.eye(self.dims[path.source], dtype=np.int64)
        return linalg.chain([self.mats[x] for x in path.letters], self.p)

    def relation_matrix(self, rel: Relation) -> np.ndarray:
        out = np.zeros((self.dims[rel.target], self.dims[rel.source]), dtype=np.int64)
        for c, term in rel.terms:
            out = (out + c * self.path_matrix(term)) % self.p
        return out

    def flat(self) -> tuple[list[str], dict[str, np.ndarray]]:
        """Vertex label per basis vector and arrow matrices on the whole space."""
        off = self.offsets()
        labels = [v for v in self.algebra.vertices for _ in range(self.dims[v])]
        big = {}
        for arrow in self.algebra.quiver.arrows:
            m = np.zeros((self.dim, self.dim), dtype=np.int64)
            s, e = arrow.source, arrow.target
            m[off[e] : off[e] + self.dims[e], off[s] : off[s] + self.dims[s]] = self.mats[arrow.name]
            big[arrow.name] = m
        return labels, big

    @classmethod
    def from_flat(cls, algebra: "AlgebraTable", labels, mats: Mapping[str, np.ndarray], meta=None) -> "Rep":
        """Build from matrices on a basis whose i-th vector sits at vertex ``labels[i]``.

        Entries joining basis vectors at the wrong vertices must be zero.
        """
        labels = [str(x) for x in labels]
        pos = {v: [i for i, x in enumerate(labels) if x == v] for v in algebra.vertices}
        dims = {v: len(ix) for v, ix in pos.items()}
        blocks = {}
        for arrow in algebra.quiver.arrows:
            m = np.array(mats.get(arrow.name, np.zeros((len(labels), len(labels)))), dtype=np.int64) % algebra.p
            block = m[np.ix_(pos[arrow.target], pos[arrow.source])]
            if np.count_nonzero(m) != np.count_nonzero(block):
                raise ValueError(f"matrix of {arrow.name} does not respect the vertex grading")
            blocks[arrow.name] = block
        return cls(algebra, dims, blocks, meta)

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.name,
            "p": self.p,
            "dims": dict(self.dims),
            "arrows": {k: m.tolist() for k, m in self.mats.items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False)

    @classmethod
    def from_json(cls, algebra: "AlgebraTable", data: Mapping) -> "Rep":
        if data.get("algebra") not in (None, algebra.name):
            raise AlgebraMismatchError(f"module belongs to {data['algebra']}, not {algebra.name}")
        dims = {str(k): int(v) for k, v in data["dims"].items()}
        mats = {}
        for k, rows in data["arrows"].items():
            shape = (dims.get(algebra.quiver.arrow(k).target, 0), dims.get(algebra.quiver.arrow(k).source, 0))
            mats[k] = np.array(rows, dtype=np.int64).reshape(shape)
        return cls(algebra, dims, mats)

    def same_as(self, other: "Rep") -> bool:
        return (
            self.algebra is other.algebra
            and self.dims == other.dims
            and all(np.array_equal(self.mats[k], other.mats[k]) for k in self.mats)
        )

    def __repr__(self) -> str:
        return f"Rep({self.algebra.name}, dims={self.dim_vector})"


@dataclass(frozen=True)
class RepMap:
    """A module homomorphism, one block ``(d'_u, d_u)`` per vertex."""

    source: Rep
    target: Rep
    blocks: dict

    def is_homomorphism(self) -> bool:
        p = self.source.p
        for arrow in self.source.algebra.quiver.arrows:
            lhs = linalg.matmul(self.blocks[arrow.target], self.source.mats[arrow.name], p)
            rhs = linalg.matmul(self.target.mats[arrow.name], self.blocks[arrow.source], p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def is_invertible(self) -> bool:
        return all(linalg.is_invertible(b, self.source.p) for b in self.blocks.values())

    def compose(self, first: "RepMap") -> "RepMap":
        """``self o first``."""
        p = self.source.p
        return RepMap(
            first.source,
            self.target,
            {v: linalg.matmul(self.blocks[v], first.blocks[v], p) for v in self.blocks},
        )

    def vector(self) -> np.ndarray:
        return np.concatenate([self.blocks[v].reshape(-1) for v in self.source.algebra.vertices])

    def rank(self) -> int:
        return sum(linalg.rank(b, self.source.p) for b in self.blocks.values() if b.size)

    def is_zero(self) -> bool:
        return not any(b.any() for b in self.blocks.values())


def identity_map(r: Rep) -> RepMap:
    return RepMap(r, r, {v: np.eye(d, dtype=np.int64) for v, d in r.dims.items()})


def map_from_vector(m: Rep, n: Rep, vec: np.ndarray) -> RepMap:
    blocks, acc = {}, 0
    for v in m.algebra.vertices:
        size = n.dims[v] * m.dims[v]
        blocks[v] = np.asarray(vec[acc : acc + size], dtype=np.int64).reshape(n.dims[v], m.dims[v]) % m.p
        acc += size
    return RepMap(m, n, blocks)


# ---------------------------------------------------------------------------
# validation and constructions


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    relation: Relation | None = None
    value: np.ndarray | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate(r: Rep) -> ValidationReport:
    """Evaluate every relation; report the first one that does not vanish."""
    for rel in r.algebra.presentation.relations:
        val = r.relation_matrix(rel)
        if val.any():
            return ValidationReport(False, rel, val)
    return ValidationReport(True)


def simple(a: "AlgebraTable", u: str) -> Rep:
    a.quiver.trivial(u)
    return Rep(a, {u: 1}, {})


def zero_rep(a: "AlgebraTable") -> Rep:
    return Rep(a, {}, {})


def _same_algebra(r1: Rep, r2: Rep) -> None:
    if r1.algebra is not r2.algebra:
        raise AlgebraMismatchError(f"{r1.algebra!r} vs {r2.algebra!r}")


def direct_sum(r1: Rep, r2: Rep) -> Rep:
    _same_algebra(r1, r2)
    dims = {v: r1.dims[v] + r2.dims[v] for v in r1.dims}
    mats = {}
    for arrow in r1.algebra.quiver.arrows:
        a, b = r1.mats[arrow.name], r2.mats[arrow.name]
        m = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.int64)
        m[: a.shape[0], : a.shape[1]] = a
        m[a.shape[0] :, a.shape[1] :] = b
        mats[arrow.name] = m
    return Rep(r1.algebra, dims, mats)


def column_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Deterministic basis (as columns) of the column space of ``m``."""
    if m.size == 0:
        return np.zeros((m.shape[0], 0), dtype=np.int64)
    r, _, k = linalg.rref(m.T, p)
    return r[:k].T.copy()


def subrep(r: Rep, bases: Mapping[str, np.ndarray]) -> Rep:
    """The submodule spanned by the given per-vertex column bases.

    The bases must span an arrow-stable subspace; the induced action is
    expressed in the given coordinates.
    """
    p = r.p
    dims = {v: bases[v].shape[1] for v in r.algebra.vertices}
    mats = {}
    for arrow in r.algebra.quiver.arrows:
        ks, ke = bases[arrow.source], bases[arrow.target]
        img = linalg.matmul(r.mats[arrow.name], ks, p) if ks.shape[1] else np.zeros((r.dims[arrow.target], 0), dtype=np.int64)
        if ke.shape[1] == 0:
            if img.any():
                raise ValueError(f"subspace is not stable under {arrow.name}")
            mats[arrow.name] = np.zeros((0, ks.shape[1]), dtype=np.int64)
            continue
        cols = []
        for j in range(img.shape[1]):
            sol = linalg.solve_affine(ke, img[:, j], p)
            if sol is None:
                raise ValueError(f"subspace is not stable under {arrow.name}")
            cols.append(sol[0])
        mats[arrow.name] = np.array(cols, dtype=np.int64).T.reshape(ke.shape[1], ks.shape[1])
    return Rep(r.algebra, dims, mats)


@dataclass(frozen=True)
class TopRadical:
    top: dict[str, int]
    radical: Rep
    radical_basis: dict[str, np.ndarray]
    top_vectors: dict[str, np.ndarray]


def top_and_radical(r: Rep) -> TopRadical:
    """Top multiplicities, the radical submodule and chosen top representatives.

    ``top_vectors[v]`` holds (as columns) unit vectors completing the radical
    at ``v`` to a basis, chosen greedily in index order.
    """
    p = r.p
    rad_basis, top_vecs, top = {}, {}, {}
    for v in r.algebra.vertices:
        d = r.dims[v]
        images = [r.mats[a.name] for a in r.algebra.quiver.in_arrows(v) if r.mats[a.name].size]
        span = np.hstack(images) if images else np.zeros((d, 0), dtype=np.int64)
        basis = column_basis(span, p) if span.size else np.zeros((d, 0), dtype=np.int64)
        rad_basis[v] = basis
        chosen = []
        cur = basis.T.copy()
        k = basis.shape[1]
        for i in range(d):
            if k + len(chosen) == d:
                break
            e = np.zeros(d, dtype=np.int64)
            e[i] = 1
            cand = np.vstack([cur, e]) if cur.size else e.reshape(1, -1)
            if linalg.rank(cand, p) > cur.shape[0]:
                cur = cand
                chosen.append(e)
        top_vecs[v] = np.array(chosen, dtype=np.int64).T.reshape(d, len(chosen))
        top[v] = d - k
    return TopRadical(top, subrep(r, rad_basis), rad_basis, top_vecs)


# ---------------------------------------------------------------------------
# homomorphisms and isomorphism


def hom_system(m: Rep, n: Rep) -> np.ndarray:
    """Matrix whose kernel is Hom(m, n) in the coordinates of :func:`map_from_vector`."""
    _same_algebra(m, n)
    a = m.algebra
    offsets, acc = {}, 0
    for v in a.vertices:
        offsets[v] = acc
        acc += n.dims[v] * m.dims[v]
    rows = []
    for arrow in a.quiver.arrows:
        s, e = arrow.source, arrow.target
        X, Y = m.mats[arrow.name], n.mats[arrow.name]
        neq = n.dims[e] * m.dims[s]
        if neq == 0:
            continue
        block = np.zeros((neq, acc), dtype=np.int64)
        if n.dims[e] * m.dims[e]:
            block[:, offsets[e] : offsets[e] + n.dims[e] * m.dims[e]] += np.kron(np.eye(n.dims[e], dtype=np.int64), X.T)
        if n.dims[s] * m.dims[s]:
            block[:, offsets[s] : offsets[s] + n.dims[s] * m.dims[s]] -= np.kron(Y, np.eye(m.dims[s], dtype=np.int64))
        rows.append(block % a.p)
    if not rows:
        return np.zeros((0, acc), dtype=np.int64)
    return np.vstack(rows)


def intertwiners(m: Rep, n: Rep) -> list[RepMap]:
    """A basis of Hom_A(m, n)."""
    system = hom_system(m, n)
    return [map_from_vector(m, n, v) for v in linalg.kernel_basis(system, m.p)]


@dataclass(frozen=True)
class IsoResult:
    answer: str  # "yes" | "no" | "inconclusive"
    witness: RepMap | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.answer == "yes"


ENUMERATION_LIMIT = 10**6
RANDOM_TRIES = 64


def _invertible_combinations(blocks: dict[str, np.ndarray], coeffs: np.ndarray, p: int) -> np.ndarray:
    ok = np.ones(coeffs.shape[0], dtype=bool)
    for v, stack in blocks.items():
        if stack.shape[1] == 0:
            continue
        combo = np.tensordot(coeffs, stack, axes=(1, 0)) % p
        ok &= linalg.batched_full_rank(combo, p)
    return ok


def is_isomorphic(r1: Rep, r2: Rep, seed: int = 0) -> IsoResult:
    """Decide whether two modules are isomorphic.

    Cheap invariants are compared first.  Then a basis of Hom(r1, r2) is
    searched for an invertible combination: exhaustively when the space has
    at most ``ENUMERATION_LIMIT`` elements, otherwise by ``RANDOM_TRIES``
    random draws (a failed random search is reported as inconclusive).
    """
    _same_algebra(r1, r2)
    if r1.dims != r2.dims:
        return IsoResult("no", reason="dimension vectors differ")
    p = r1.p
    if r1.dim == 0:
        return IsoResult("yes", RepMap(r1, r2, {v: np.zeros((0, 0), dtype=np.int64) for v in r1.dims}))
    hom = intertwiners(r1, r2)
    h = len(hom)
    if h == 0:
        return IsoResult("no", reason="Hom(r1, r2) = 0")
    end1 = len(intertwiners(r1, r1))
    if end1 != h:
        return IsoResult("no", reason=f"dim Hom(r1, r2) = {h} but dim End(r1) = {end1}")
    end2 = len(intertwiners(r2, r2))
    if end2 != h:
        return IsoResult("no", reason=f"dim Hom(r1, r2) = {h} but dim End(r2) = {end2}")
    tops1 = top_and_radical(r1).top
    tops2 = top_and_radical(r2).top
    if tops1 != tops2:
        return IsoResult("no", reason="tops differ")

    blocks = {v: np.array([f.blocks[v] for f in hom]) for v in r1.algebra.vertices}

    def witness(c: np.ndarray) -> RepMap:
        return RepMap(r1, r2, {v: np.tensordot(c, blocks[v], axes=(0, 0)) % p for v in blocks})

    # single basis elements and a few random combinations usually hit first
    rng = np.random.default_rng(seed)
    trial = np.vstack([np.eye(h, dtype=np.int64), rng.integers(0, p, size=(RANDOM_TRIES, h))])
    ok = _invertible_combinations(blocks, trial, p)
    if ok.any():
        return IsoResult("yes", witness(trial[int(np.argmax(ok))]))
    if p**h > ENUMERATION_LIMIT:
        return IsoResult("inconclusive", reason=f"{p}^{h} combinations exceed the enumeration limit")
    total = p**h
    chunk = 8192
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk))
        coeffs = np.stack(np.unravel_index(idx, (p,) * h), axis=1).astype(np.int64)
        ok = _invertible_combinations(blocks, coeffs, p)
        if ok.any():
            return IsoResult("yes", witness(coeffs[int(np.argmax(ok))]))
    return IsoResult("no", reason=f"none of the {total} elements of Hom(r1, r2) is invertible")


def hom_dim(m: Rep, n: Rep) -> int:
    system = hom_system(m, n)
    return system.shape[1] - linalg.rank(system, m.p) if system.size else system.shape[1]
