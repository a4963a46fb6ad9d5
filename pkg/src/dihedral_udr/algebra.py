"""Finite-dimensional path algebras kQ/I as explicit structure-constant tables.

The quotient is computed without a Groebner engine.  For a path-length bound
``L`` the algebra ``kQ / (I + kQ_{>L})`` is the space of paths of length
``<= L`` modulo the span of all truncated products ``q * r * q'`` (``r`` a
relation).  Each Peirce component ``e_v kQ e_u`` is reduced separately, with
columns ordered from the largest path (length, then letters) down, so the
surviving non-pivot paths are the smallest representatives.  Once two
consecutive bounds give the same dimension every longer path already lies in
``I`` and the truncation is the algebra itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from . import linalg
from .quiver import Path, Presentation, Quiver, path_key, PresentationError

if TYPE_CHECKING:
    from .rep import Rep

HARD_LENGTH_CAP = 24


class NoStabilizationError(PresentationError):
    """The truncated quotients kept growing up to the length cap."""


@dataclass
class _Truncation:
    length: int
    dim: int
    normal_form: dict[Path, dict[Path, int]]  # path -> {basis path: coeff}
    basis: list[Path]


def _truncated_quotient(pres: Presentation, p: int, length: int) -> _Truncation:
    q = pres.quiver
    paths = q.paths(length)
    by_comp: dict[tuple[str, str], list[Path]] = {}
    for path in paths:
        by_comp.setdefault((path.source, path.target), []).append(path)
    ending_at: dict[str, list[Path]] = {v: [] for v in q.vertices}
    starting_at: dict[str, list[Path]] = {v: [] for v in q.vertices}
    for path in paths:
        ending_at[path.target].append(path)
        starting_at[path.source].append(path)

    # columns: largest path first so pivots fall on the largest terms
    col_of: dict[tuple[str, str], dict[Path, int]] = {}
    for comp, ps in by_comp.items():
        ordered = sorted(ps, key=path_key, reverse=True)
        by_comp[comp] = ordered
        col_of[comp] = {path: i for i, path in enumerate(ordered)}

    gens: dict[tuple[str, str], list[np.ndarray]] = {c: [] for c in by_comp}
    for rel in pres.relations:
        shortest = min(len(t) for _, t in rel.terms)
        for right in ending_at[rel.source]:
            if len(right) + shortest > length:
                continue
            for left in starting_at[rel.target]:
                if len(left) + len(right) + shortest > length:
                    continue
                comp = (right.source, left.target)
                vec = np.zeros(len(by_comp[comp]), dtype=np.int64)
                for c, term in rel.terms:
                    full = Path(left.letters + term.letters + right.letters, right.source, left.target)
                    if len(full) <= length:
                        vec[col_of[comp][full]] += c
                vec %= p
                if vec.any():
                    gens[comp].append(vec)

    normal_form: dict[Path, dict[Path, int]] = {}
    basis: list[Path] = []
    for comp, ordered in by_comp.items():
        if gens[comp]:
            r, pivots, k = linalg.rref(np.array(gens[comp]), p)
        else:
            r, pivots, k = np.zeros((0, len(ordered)), dtype=np.int64), [], 0
        pivot_row = {c: i for i, c in enumerate(pivots)}
        free = [c for c in range(len(ordered)) if c not in pivot_row]
        basis.extend(ordered[c] for c in free)
        for c, path in enumerate(ordered):
            if c in pivot_row:
                row = r[pivot_row[c]]
                normal_form[path] = {ordered[f]: int((-row[f]) % p) for f in free if row[f]}
            else:
                normal_form[path] = {path: 1}
    basis.sort(key=path_key)
    return _Truncation(length, len(basis), normal_form, basis)


@dataclass(frozen=True)
class TwoSidedIdealBasis:
    """An ideal of an :class:`AlgebraTable`, given by RREF row vectors."""

    algebra: "AlgebraTable"
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def contains(self, x: np.ndarray) -> bool:
        return linalg.in_span(np.asarray(x) % self.algebra.p, self.vectors, self.algebra.p)


@dataclass(eq=False)
class AlgebraTable:
    """A basic algebra kQ/I with basis of path representatives.

    Attributes:
        presentation: the defining quiver and relations.
        p: characteristic of the ground field F_p.
        basis: normal-word paths, ordered by length then letters.
        mult: ``mult[i, j]`` is the coordinate vector of ``basis[i] * basis[j]``
            (``basis[j]`` acts first).
        stabilization_length: smallest path-length bound at which the
            truncated quotient stopped growing.
    """

    presentation: Presentation
    p: int
    basis: list[Path]
    mult: np.ndarray
    stabilization_length: int
    _normal_form: dict[Path, dict[Path, int]] = field(repr=False)

    def __post_init__(self) -> None:
        self.index = {b: i for i, b in enumerate(self.basis)}
        self.vertex_idempotents = {v: self.index[self.quiver.trivial(v)] for v in self.quiver.vertices}

    @property
    def name(self) -> str:
        return self.presentation.name

    @property
    def quiver(self) -> Quiver:
        return self.presentation.quiver

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def field(self) -> linalg.PrimeField:
        return linalg.PrimeField(self.p)

    def __repr__(self) -> str:
        return f"AlgebraTable({self.name!r}, p={self.p}, dim={self.dim})"

    # -- elements ---------------------------------------------------------
    def reduce_path(self, path: Path) -> np.ndarray:
        """Coordinates of the image of ``path`` in the algebra."""
        v = np.zeros(self.dim, dtype=np.int64)
        if len(path) > self.stabilization_length + 1:
            return v
        nf = self._normal_form.get(path)
        if nf is None:  # longer than the truncation: zero in the algebra
            return v
        for b, c in nf.items():
            v[self.index[b]] = c
        return v

    def element(self, letters) -> np.ndarray:
        if isinstance(letters, str):
            letters = [x for x in letters.replace(" ", "").split("*") if x]
        return self.reduce_path(self.quiver.path(letters))

    def idempotent(self, v: str) -> np.ndarray:
        x = np.zeros(self.dim, dtype=np.int64)
        x[self.vertex_idempotents[v]] = 1
        return x

    def one(self) -> np.ndarray:
        return sum(self.idempotent(v) for v in self.vertices) % self.p

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """``x * y`` (``y`` acts first)."""
        return np.einsum("i,j,ijk->k", x, y, self.mult) % self.p

    def left_mult_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ``y -> x*y`` acting on coordinate columns."""
        return (np.einsum("i,ijk->kj", x, self.mult)) % self.p

    def right_mult_matrix(self, x: np.ndarray) -> np.ndarray:
        return (np.einsum("j,ijk->ki", x, self.mult)) % self.p

    def peirce(self, u: str, v: str) -> list[int]:
        """Basis indices spanning ``e_v * A * e_u`` (paths from u to v)."""
        return [i for i, b in enumerate(self.basis) if b.source == u and b.target == v]

    def arrow_element(self, name: str) -> np.ndarray:
        return self.reduce_path(self.quiver.path([name]))

    # -- structure ----------------------------------------------------------
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.transpose(1, 0, 2)))

    def check_associative(self) -> bool:
        # (b_i b_j) b_k versus b_i (b_j b_k), all triples at once
        left = np.einsum("ijm,mkn->ijkn", self.mult, self.mult) % self.p
        right = np.einsum("jkm,imn->ijkn", self.mult, self.mult) % self.p
        return bool(np.array_equal(left, right))

    def symmetric_form(self, tries: int = 64, seed: int = 0) -> np.ndarray | None:
        """A linear form f with f(ab) = f(ba) and (a, b) -> f(ab) nondegenerate.

        Searches the space of trace-like forms (those vanishing on all
        commutators); returns ``None`` when none of the candidates is
        nondegenerate.
        """
        comm = (self.mult - self.mult.transpose(1, 0, 2)).reshape(-1, self.dim) % self.p
        traces = linalg.kernel_basis(comm, self.p)
        if not traces:
            return None
        t = np.array(traces)
        k = t.shape[0]
        candidates: list[np.ndarray] = []
        if self.p**k <= 4096:
            import itertools

            for coeffs in itertools.product(range(self.p), repeat=k):
                if any(coeffs):
                    candidates.append(np.array(coeffs) @ t % self.p)
        else:
            rng = np.random.default_rng(seed)
            candidates = [rng.integers(0, self.p, k) @ t % self.p for _ in range(tries)]
        for f in candidates:
            gram = np.einsum("ijk,k->ij", self.mult, f) % self.p
            if linalg.rank(gram, self.p) == self.dim:
                return f
        return None


def build_algebra(pres: Presentation, p: int, length_cap: int = HARD_LENGTH_CAP) -> AlgebraTable:
    """Build kQ/I over F_p from a presentation.

    Raises:
        CharMismatchError: the presentation requires a different characteristic.
        NoStabilizationError: the truncated dimension kept growing up to ``length_cap``.
    """
    linalg.PrimeField(p)
    pres.check_char(p)
    prev = _truncated_quotient(pres, p, 1)
    for length in range(2, min(length_cap, HARD_LENGTH_CAP) + 1):
        cur = _truncated_quotient(pres, p, length)
        if cur.dim == prev.dim:
            table = _assemble(pres, p, cur, prev.length)
            return table
        prev = cur
    raise NoStabilizationError(
        f"{pres.name}: dimension still growing at path length {length_cap} (last dim {prev.dim})"
    )


def _assemble(pres: Presentation, p: int, trunc: _Truncation, stable_at: int) -> AlgebraTable:
    basis = trunc.basis
    index = {b: i for i, b in enumerate(basis)}
    n = len(basis)
    mult = np.zeros((n, n, n), dtype=np.int64)
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            prod = a * b
            if prod is None:
                continue
            nf = trunc.normal_form.get(prod)
            if nf is None:
                continue
            for c, coeff in nf.items():
                mult[i, j, index[c]] = coeff
    return AlgebraTable(pres, p, basis, mult, stable_at, trunc.normal_form)


_BUILD_CACHE: dict[tuple[str, int], AlgebraTable] = {}


def catalog_algebra(name: str, p: int) -> AlgebraTable:
    """Build (and memoize) a catalog algebra."""
    from .quiver import catalog, canonical_name

    key = (canonical_name(name), p)
    if key not in _BUILD_CACHE:
        _BUILD_CACHE[key] = build_algebra(catalog(name, p), p)
    return _BUILD_CACHE[key]


# ---------------------------------------------------------------------------
# radical, socle, projectives


def radical(a: AlgebraTable) -> TwoSidedIdealBasis:
    """Span of the nontrivial basis paths (the image of the arrow ideal)."""
    rows = [np.eye(a.dim, dtype=np.int64)[i] for i, b in enumerate(a.basis) if not b.is_trivial]
    vecs = np.array(rows, dtype=np.int64).reshape(-1, a.dim)
    return TwoSidedIdealBasis(a, linalg.row_basis(vecs, a.p, a.dim))


def ideal_product(i1: TwoSidedIdealBasis, i2: TwoSidedIdealBasis) -> TwoSidedIdealBasis:
    a = i1.algebra
    prods = [a.product(x, y) for x in i1.vectors for y in i2.vectors]
    return TwoSidedIdealBasis(a, linalg.row_basis(prods, a.p, a.dim))


def radical_powers(a: AlgebraTable) -> list[int]:
    """Dimensions of rad^1, rad^2, ... down to the first zero power."""
    rad = radical(a)
    cur = rad
    dims = [cur.dim]
    while cur.dim:
        cur = ideal_product(cur, rad)
        dims.append(cur.dim)
        if len(dims) > a.dim + 1:
            raise RuntimeError("radical is not nilpotent")
    return dims


def socle(a: AlgebraTable) -> TwoSidedIdealBasis:
    """Two-sided annihilator of the radical: x with arrow*x = 0 = x*arrow."""
    blocks = []
    for arrow in a.quiver.arrows:
        z = a.arrow_element(arrow.name)
        blocks.append(a.left_mult_matrix(z))
        blocks.append(a.right_mult_matrix(z))
    system = np.vstack(blocks) if blocks else np.zeros((0, a.dim), dtype=np.int64)
    ker = linalg.kernel_basis(system, a.p)
    return TwoSidedIdealBasis(a, linalg.row_basis(ker, a.p, a.dim))


def is_j_zero(a: AlgebraTable, path: Path, soc: TwoSidedIdealBasis | None = None) -> bool:
    """True when ``path`` maps into soc(A), i.e. vanishes in A/soc(A)."""
    soc = soc if soc is not None else socle(a)
    return soc.contains(a.reduce_path(path))


def j_nonzero_paths(a: AlgebraTable) -> set[Path]:
    """Every path (trivial ones included) that survives in A/soc(A)."""
    cached = getattr(a, "_j_nonzero", None)
    if cached is not None:
        return cached
    soc = socle(a)
    q = a.quiver
    alive = {q.trivial(v) for v in q.vertices}
    layer = [q.trivial(v) for v in q.vertices]
    while layer:
        nxt = []
        for path in layer:
            for arrow in q.in_arrows(path.source):
                ext = Path(path.letters + (arrow.name,), arrow.source, path.target)
                if ext.letters[1:] and Path(ext.letters[1:], ext.source, q.arrow(ext.letters[1]).target) not in alive:
                    continue
                if not is_j_zero(a, ext, soc):
                    alive.add(ext)
                    nxt.append(ext)
        layer = nxt
    a._j_nonzero = alive
    return alive


def forbidden_subpaths(a: AlgebraTable) -> set[Path]:
    """Minimal paths that vanish in A/soc(A).

    A path is returned when its image lies in soc(A) (zero included) while both
    of its maximal proper subpaths survive.
    """
    alive = j_nonzero_paths(a)
    q = a.quiver
    out = set()
    for path in alive:
        for arrow in q.in_arrows(path.source):
            ext = Path(path.letters + (arrow.name,), arrow.source, path.target)
            if ext in alive:
                continue
            if len(ext) == 1:
                out.add(ext)
                continue
            head = Path(ext.letters[1:], ext.source, q.arrow(ext.letters[1]).target)
            if head in alive:
                out.add(ext)
    return out


def projective(a: AlgebraTable, u: str) -> "Rep":
    """The indecomposable projective left module ``A e_u``."""
    from .rep import Rep

    dims = {v: len(a.peirce(u, v)) for v in a.vertices}
    mats = {}
    for arrow in a.quiver.arrows:
        src = a.peirce(u, arrow.source)
        tgt = a.peirce(u, arrow.target)
        left = a.left_mult_matrix(a.arrow_element(arrow.name))
        mats[arrow.name] = left[np.ix_(tgt, src)] % a.p
    return Rep(a, dims, mats)


def regular_module(a: AlgebraTable) -> "Rep":
    from .rep import direct_sum

    mods = [projective(a, u) for u in a.vertices]
    out = mods[0]
    for m in mods[1:]:
        out = direct_sum(out, m)
    return out
