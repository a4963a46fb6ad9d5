"""Lifts of modules over F_p[t]/(t^n) and the deformation-ring classifier.

A lift of order ``n`` stores, for every arrow, the coefficient matrices of
``t^0 .. t^(n-1)``; the vertex projectors stay constant.  The degree-0 part
is the base module.

Classification follows the shape of the tangent space:

* stable End not one-dimensional: only a versal ring exists, nothing to classify;
* Ext^1 = 0: the ring is k;
* Ext^1 = 1: the ring is a quotient of k[[t]].  An obstruction when lifting
  the nontrivial first-order class to F_p[t]/(t^3) gives k[[t]]/(t^2); a
  verified polynomial lift gives k[[t]]; otherwise lifts are searched up to a
  cap;
* Ext^1 >= 2: only the local commutative case with the simple module (and its
  syzygies) is decided, where the ring is the algebra itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Mapping

import numpy as np

from . import linalg
from .algebra import AlgebraTable
from .homological import omega, stable_end_dim
from .rep import Rep, is_isomorphic, simple

DEFAULT_CAP = 10
SEARCH_BUDGET = 4000


class RelationFailure(ValueError):
    def __init__(self, relation, value):
        super().__init__(f"relation {relation.text()} does not vanish: {value.tolist()}")
        self.relation = relation
        self.value = value


class TrivialDirection(ValueError):
    pass


# ---------------------------------------------------------------------------
# coordinates: a tuple of arrow matrices <-> one flat vector


def _arrow_layout(v: Rep) -> list[tuple[str, int, tuple[int, int]]]:
    out, acc = [], 0
    for arrow in v.algebra.quiver.arrows:
        shape = (v.dims[arrow.target], v.dims[arrow.source])
        out.append((arrow.name, acc, shape))
        acc += shape[0] * shape[1]
    return out


def arrows_to_vector(v: Rep, mats: Mapping[str, np.ndarray]) -> np.ndarray:
    return np.concatenate([np.asarray(mats[n]).reshape(-1) for n, _, _ in _arrow_layout(v)] + [np.zeros(0, dtype=np.int64)]) % v.p


def vector_to_arrows(v: Rep, vec: np.ndarray) -> dict[str, np.ndarray]:
    return {n: np.asarray(vec[o : o + s[0] * s[1]], dtype=np.int64).reshape(s) % v.p for n, o, s in _arrow_layout(v)}


def _path_product(mats: Mapping[str, np.ndarray], letters, dims_of, p: int) -> np.ndarray:
    if not letters:
        return np.eye(dims_of, dtype=np.int64)
    return linalg.chain([mats[x] for x in letters], p)


def linearized_relations(v: Rep) -> np.ndarray:
    """Matrix of D -> (d/dt) relations(X + tD) at t = 0, in flat coordinates."""
    p = v.p
    layout = {n: (o, s) for n, o, s in _arrow_layout(v)}
    width = sum(s[0] * s[1] for _, s in layout.values())
    q = v.algebra.quiver
    blocks = []
    for rel in v.algebra.presentation.relations:
        rows = v.dims[rel.target] * v.dims[rel.source]
        block = np.zeros((rows, width), dtype=np.int64)
        if rows:
            for c, path in rel.terms:
                letters = path.letters
                for i, name in enumerate(letters):
                    arrow = q.arrow(name)
                    left = _path_product(v.mats, letters[:i], v.dims[arrow.target], p)
                    right = _path_product(v.mats, letters[i + 1 :], v.dims[arrow.source], p)
                    o, s = layout[name]
                    if s[0] * s[1]:
                        block[:, o : o + s[0] * s[1]] += c * np.kron(left, right.T)
        blocks.append(block % p)
    if not blocks:
        return np.zeros((0, width), dtype=np.int64)
    return np.vstack(blocks) % p


def coboundary_matrix(v: Rep) -> np.ndarray:
    """Columns: vertex-block unknowns B_u; rows: flat arrow coordinates of delta(B)."""
    p = v.p
    a = v.algebra
    offs, acc = {}, 0
    for u in a.vertices:
        offs[u] = acc
        acc += v.dims[u] ** 2
    layout = _arrow_layout(v)
    rows = sum(s[0] * s[1] for _, _, s in layout)
    out = np.zeros((rows, acc), dtype=np.int64)
    for name, o, (de, ds) in layout:
        if de * ds == 0:
            continue
        arrow = a.quiver.arrow(name)
        X = v.mats[name]
        e, s = arrow.target, arrow.source
        out[o : o + de * ds, offs[e] : offs[e] + de * de] += np.kron(np.eye(de, dtype=np.int64), X.T)
        out[o : o + de * ds, offs[s] : offs[s] + ds * ds] -= np.kron(X, np.eye(ds, dtype=np.int64))
    return out % p


@dataclass(frozen=True)
class FirstOrderSpace:
    module: Rep
    cocycles: list[np.ndarray]
    coboundaries: np.ndarray  # RREF rows

    @property
    def ext1(self) -> int:
        return len(self.cocycles) - self.coboundaries.shape[0]

    def is_coboundary(self, vec: np.ndarray) -> bool:
        return linalg.in_span(np.asarray(vec) % self.module.p, self.coboundaries, self.module.p)

    def is_cocycle(self, vec: np.ndarray) -> bool:
        lin = linearized_relations(self.module)
        return not (linalg.matmul(lin, np.asarray(vec).reshape(-1, 1), self.module.p)).any()

    def class_representatives(self) -> list[np.ndarray]:
        """Cocycles whose classes form a basis of Ext^1(V, V)."""
        p = self.module.p
        cur = self.coboundaries
        out = []
        for z in self.cocycles:
            if not linalg.in_span(z, cur, p):
                out.append(z)
                cur = np.vstack([cur, z]) if cur.size else z.reshape(1, -1)
            if len(out) == self.ext1:
                break
        return out


def first_order(v: Rep) -> FirstOrderSpace:
    p = v.p
    lin = linearized_relations(v)
    width = lin.shape[1]
    cocycles = linalg.kernel_basis(lin, p) if lin.shape[0] else [np.eye(width, dtype=np.int64)[i] for i in range(width)]
    cob = coboundary_matrix(v)
    cob_rows = linalg.row_basis(list(cob.T), p, width) if cob.size else np.zeros((0, width), dtype=np.int64)
    return FirstOrderSpace(v, cocycles, cob_rows)


# ---------------------------------------------------------------------------
# lifts over F_p[t]/(t^n)


@dataclass(frozen=True)
class LiftOrderN:
    """Arrow matrices over F_p[t]/(t^order); ``coeffs[name][d]`` is the t^d part."""

    base: Rep
    coeffs: dict

    @property
    def order(self) -> int:
        return next(iter(self.coeffs.values())).shape[0] if self.coeffs else 1

    @classmethod
    def trivial(cls, v: Rep) -> "LiftOrderN":
        return cls(v, {n: m[None, :, :].copy() for n, m in v.mats.items()})

    @classmethod
    def first_order(cls, v: Rep, direction: Mapping[str, np.ndarray]) -> "LiftOrderN":
        return cls(v, {n: np.stack([v.mats[n], np.asarray(direction[n]) % v.p]) for n in v.mats})

    def extended(self, top: Mapping[str, np.ndarray]) -> "LiftOrderN":
        return LiftOrderN(self.base, {n: np.concatenate([c, (np.asarray(top[n]) % self.base.p)[None]]) for n, c in self.coeffs.items()})

    def coefficient(self, d: int) -> dict[str, np.ndarray]:
        return {n: c[d] for n, c in self.coeffs.items()}

    def relation_values(self, order: int | None = None) -> list[np.ndarray]:
        """Every relation evaluated over F_p[t]/(t^order) as a coefficient stack."""
        v = self.base
        p = v.p
        order = order or self.order
        out = []
        for rel in v.algebra.presentation.relations:
            acc = np.zeros((order, v.dims[rel.target], v.dims[rel.source]), dtype=np.int64)
            for c, path in rel.terms:
                mats = [self._padded(x, order) for x in path.letters]
                acc = (acc + c * linalg.poly_chain(mats, p, order)) % p
            out.append(acc)
        return out

    def _padded(self, name: str, order: int) -> np.ndarray:
        c = self.coeffs[name]
        if c.shape[0] >= order:
            return c[:order]
        pad = np.zeros((order - c.shape[0],) + c.shape[1:], dtype=np.int64)
        return np.concatenate([c, pad])

    def is_valid(self) -> bool:
        return all(not v.any() for v in self.relation_values())


@dataclass(frozen=True)
class Obstruction:
    order: int  # the truncation F_p[t]/(t^order) that could not be reached
    system: np.ndarray
    rhs: np.ndarray


@dataclass(frozen=True)
class ExtendResult:
    lift: LiftOrderN | None
    obstruction: Obstruction | None = None
    kernel: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.lift is not None


def extend_lift(lift: LiftOrderN, lin: np.ndarray | None = None) -> ExtendResult:
    """Try to add a t^n coefficient to a lift of order n.

    The new coefficient solves ``lin(E) = -[t^n] relations(X)``; the returned
    lift uses the solution with free variables set to zero and ``kernel`` holds
    the cocycles that may be added to it.
    """
    v = lift.base
    p = v.p
    n = lift.order
    lin = linearized_relations(v) if lin is None else lin
    rhs = np.concatenate([val[n].reshape(-1) for val in lift.relation_values(n + 1)] + [np.zeros(0, dtype=np.int64)])
    rhs = (-rhs) % p
    if lin.shape[0] == 0:
        sol = (np.zeros(lin.shape[1], dtype=np.int64), [])
    else:
        sol = linalg.solve_affine(lin, rhs, p)
    if sol is None:
        return ExtendResult(None, Obstruction(n + 1, lin, rhs))
    x, ker = sol
    return ExtendResult(lift.extended(vector_to_arrows(v, x)), None, ker)


# ---------------------------------------------------------------------------
# polynomial lifts


@dataclass(frozen=True)
class PolyLiftCertificate:
    module: Rep
    lift: dict  # arrow -> (deg+1, d_e, d_s), transported onto the module's basis
    direction: np.ndarray  # flat first-order part
    source: str = ""


def _full_relation_values(v: Rep, lift: Mapping[str, np.ndarray]) -> list:
    p = v.p
    out = []
    for rel in v.algebra.presentation.relations:
        acc = None
        for c, path in rel.terms:
            val = linalg.poly_chain([lift[x] for x in path.letters], p)
            val = (c * val) % p
            if acc is None:
                acc = val
            else:
                if acc.shape[0] < val.shape[0]:
                    acc = np.concatenate([acc, np.zeros((val.shape[0] - acc.shape[0],) + acc.shape[1:], dtype=np.int64)])
                if val.shape[0] < acc.shape[0]:
                    val = np.concatenate([val, np.zeros((acc.shape[0] - val.shape[0],) + val.shape[1:], dtype=np.int64)])
                acc = (acc + val) % p
        out.append((rel, acc))
    return out


def verify_poly_lift(v: Rep, lift_rep_coeffs: Mapping[str, np.ndarray], source: str = "") -> PolyLiftCertificate:
    """Check that polynomial arrow matrices define a free lift of ``v`` over F_p[[t]].

    ``lift_rep_coeffs[name]`` is a coefficient stack on *some* vertex-graded
    basis with the same dimension vector as ``v``; the t = 0 reduction is
    matched to ``v`` by an explicit isomorphism and the lift is transported.

    Raises:
        RelationFailure: a relation is a nonzero polynomial matrix.
        TrivialDirection: the t-linear part is a coboundary (or there is none).
        ValueError: the t = 0 reduction is not isomorphic to ``v``.
    """
    p = v.p
    a = v.algebra
    for rel, val in _full_relation_values(v, lift_rep_coeffs):
        if val.any():
            raise RelationFailure(rel, val)
    red = Rep(a, v.dims, {n: c[0] for n, c in lift_rep_coeffs.items()})
    iso = is_isomorphic(v, red)
    if iso.answer != "yes":
        raise ValueError(f"t = 0 reduction is not isomorphic to the module ({iso.answer}: {iso.reason})")
    f = iso.witness.blocks  # f_u : V_u -> red_u, f X_v = X_red f
    finv = {u: _inverse(b, p) for u, b in f.items()}
    transported = {}
    for arrow in a.quiver.arrows:
        c = lift_rep_coeffs[arrow.name]
        transported[arrow.name] = np.stack([
            linalg.chain([finv[arrow.target], c[d], f[arrow.source]], p) if c[d].size else c[d] for d in range(c.shape[0])
        ]) % p
    direction = {n: (c[1] if c.shape[0] > 1 else np.zeros_like(c[0])) for n, c in transported.items()}
    vec = arrows_to_vector(v, direction)
    space = first_order(v)
    if not vec.any() or space.is_coboundary(vec):
        raise TrivialDirection("the first-order part of the lift is a coboundary")
    return PolyLiftCertificate(v, transported, vec, source)


def _inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    if n == 0:
        return m.copy()
    r, piv, k = linalg.rref(np.hstack([m, np.eye(n, dtype=np.int64)]), p)
    if k < n or piv[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return r[:, n:].copy()


# ---------------------------------------------------------------------------
# certificate store

_CERT_PACKAGE = "dihedral_udr.data.certificates"


def _parse_coeff(x, mu: int | None, p: int) -> int:
    if isinstance(x, str):
        if x == "mu" and mu is not None:
            return mu
        if x == "-mu" and mu is not None:
            return -mu % p
        raise ValueError(f"symbolic coefficient {x!r} needs a value of mu")
    return int(x) % p


def certificate_matrices(data: Mapping, a: AlgebraTable, mu: int | None = None) -> tuple[list[str], dict]:
    """Vertex labels and per-arrow coefficient stacks of a certificate file."""
    p = a.p
    labels = [str(x) for x in data["basis_vertices"]]
    size = len(labels)
    stacks = {}
    for arrow in a.quiver.arrows:
        rows = data["arrows"].get(arrow.name)
        if rows is None:
            stacks[arrow.name] = np.zeros((1, size, size), dtype=np.int64)
            continue
        deg = max((len(e) for row in rows for e in row), default=1)
        st = np.zeros((max(deg, 1), size, size), dtype=np.int64)
        for i, row in enumerate(rows):
            for j, entry in enumerate(row):
                for d, c in enumerate(entry):
                    st[d, i, j] = _parse_coeff(c, mu, p)
        stacks[arrow.name] = st
    return labels, stacks


def graded_stacks(a: AlgebraTable, labels: list[str], stacks: Mapping[str, np.ndarray]) -> tuple[dict, dict]:
    """Split flat coefficient stacks into vertex blocks; returns (dims, arrow stacks)."""
    pos = {v: [i for i, x in enumerate(labels) if x == v] for v in a.vertices}
    dims = {v: len(ix) for v, ix in pos.items()}
    out = {}
    for arrow in a.quiver.arrows:
        st = stacks[arrow.name]
        out[arrow.name] = st[:, pos[arrow.target], :][:, :, pos[arrow.source]] % a.p
    return dims, out


@lru_cache(maxsize=None)
def _certificate_files() -> tuple[tuple[str, str], ...]:
    root = resources.files(_CERT_PACKAGE)
    return tuple(sorted((f.name, f.read_text()) for f in root.iterdir() if f.name.endswith(".json")))


def certificates_for(algebra_name: str) -> list[tuple[str, dict]]:
    out = []
    for name, text in _certificate_files():
        data = json.loads(text)
        if data["algebra"] == algebra_name:
            out.append((name, data))
    return out


def find_certificate(v: Rep) -> PolyLiftCertificate | None:
    """Look for a shipped lift whose reduction is isomorphic to ``v``."""
    a = v.algebra
    for name, data in certificates_for(a.name):
        module = data["module"]
        mus = [None]
        if isinstance(module, dict) and "band" in module:
            if v.meta.get("kind") == "band" and v.meta.get("m") == 1 and v.meta.get("mu") not in (None, "inf"):
                mus = [int(v.meta["mu"])]
            else:
                mus = list(range(1, a.p))
        for mu in mus:
            labels, stacks = certificate_matrices(data, a, mu)
            dims, graded = graded_stacks(a, labels, stacks)
            if dims != v.dims:
                break
            red = Rep(a, dims, {n: s[0] for n, s in graded.items()})
            if is_isomorphic(v, red).answer != "yes":
                continue
            try:
                return verify_poly_lift(v, graded, source=name if mu is None else f"{name} (mu={mu})")
            except (RelationFailure, TrivialDirection, ValueError):
                continue
    return None


# ---------------------------------------------------------------------------
# classification

VERDICTS = ("k", "k[[t]]/(t^2)", "k[[t]]", "Lambda", "versal-only", "unknown")


@dataclass
class DefReport:
    verdict: str
    stable_end: int
    ext1: int | None = None
    lift_status: str | None = None  # "certified" | "verified-to-order-N"
    obstruction_order: int | None = None
    certificate: str | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def finite_dimensional(self) -> bool | None:
        if self.verdict in ("k", "k[[t]]/(t^2)", "Lambda"):
            return True
        if self.verdict == "k[[t]]":
            return False
        return None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "stable_end": self.stable_end,
            "ext1": self.ext1,
            "lift_status": self.lift_status,
            "obstruction_order": self.obstruction_order,
            "certificate": self.certificate,
            "notes": list(self.notes),
        }


def search_lifts(start: LiftOrderN, target: int, direction: np.ndarray, budget: int = SEARCH_BUDGET):
    """Depth-first search for a lift of order ``target`` extending ``start``.

    At each level the new coefficient is the particular solution plus
    ``c * direction``; up to gauge this covers every extension when Ext^1 is
    one-dimensional.  Returns ``(lift or None, deepest order reached, nodes)``.
    """
    v = start.base
    p = v.p
    lin = linearized_relations(v)
    dir_mats = vector_to_arrows(v, direction)
    deepest = start.order
    nodes = 0

    def rec(lift):
        nonlocal deepest, nodes
        deepest = max(deepest, lift.order)
        if lift.order >= target:
            return lift
        if nodes >= budget:
            return None
        nodes += 1
        res = extend_lift(lift, lin)
        if not res:
            return None
        top = res.lift.coefficient(lift.order)
        for c in range(p):
            nxt = lift.extended({n: top[n] + c * dir_mats[n] for n in top})
            got = rec(nxt)
            if got is not None:
                return got
            if nodes >= budget:
                return None
        return None

    return rec(start), deepest, nodes


def _regular_orbit_member(v: Rep) -> bool:
    """True when ``v`` is a syzygy or cosyzygy of the simple module of a local algebra."""
    a = v.algebra
    if len(a.vertices) != 1 or not a.is_commutative():
        return False
    s = simple(a, a.vertices[0])
    if is_isomorphic(v, s).answer == "yes":
        return True
    cur = s
    while cur.dim < v.dim:
        cur = omega(cur)
        if cur.dim == 0:
            break
    if cur.dim == v.dim and is_isomorphic(v, cur).answer == "yes":
        return True
    cur = v
    for _ in range(v.dim):
        cur = omega(cur)
        if cur.dim == 1:
            return True  # the only 1-dimensional module is the simple one
        if cur.dim == 0 or cur.dim > v.dim:
            break
    return False


def classify_defring(v: Rep, cap: int = DEFAULT_CAP, certificate: Mapping[str, np.ndarray] | None = None) -> DefReport:
    st = stable_end_dim(v)
    if st != 1:
        return DefReport("versal-only", st, notes=[f"stable End has dimension {st}"])
    space = first_order(v)
    e = space.ext1
    if e == 0:
        return DefReport("k", st, e)
    if e >= 2:
        if _regular_orbit_member(v):
            return DefReport("Lambda", st, e, notes=["the regular module is a lift over the algebra itself"])
        return DefReport("unknown", st, e, notes=[f"Ext^1 has dimension {e}; only the local regular case is decided"])

    d0 = space.class_representatives()[0]
    start = LiftOrderN.first_order(v, vector_to_arrows(v, d0))
    third = extend_lift(start)
    if not third:
        return DefReport("k[[t]]/(t^2)", st, e, obstruction_order=3)

    cert = None
    if certificate is not None:
        cert = verify_poly_lift(v, certificate, source="user supplied")
    else:
        cert = find_certificate(v)
    if cert is not None:
        return DefReport("k[[t]]", st, e, lift_status="certified", certificate=cert.source)

    lift, deepest, nodes = search_lifts(start, cap, d0)
    if lift is not None:
        return DefReport("k[[t]]", st, e, lift_status=f"verified-to-order-{cap}")
    note = f"no lift found beyond F_p[t]/(t^{deepest}) ({nodes} search nodes)"
    if nodes < SEARCH_BUDGET:
        note += f"; verdict k[[t]]/(t^{deepest}) unconfirmed"
    return DefReport("unknown", st, e, obstruction_order=deepest + 1, notes=[note])
