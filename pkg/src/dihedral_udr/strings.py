"""String and band modules over the catalog algebras.

Words are read left to right, ``w = w1 w2 ... wn``, with ``s(w_i) = e(w_{i+1})``.
A string is a reduced word none of whose directed pieces (or directed pieces
of its inverse) vanish in ``A/soc(A)``.  Each catalog algebra carries exactly
one band; band modules for ``mu`` in ``k*`` come from the band, while the
extra values ``0`` and ``inf`` (where allowed) are identified with string
modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .algebra import AlgebraTable, j_nonzero_paths
from .quiver import (
    Letter,
    Path,
    UnknownAlgebraError,
    Word,
    concat_words,
    letter_ends,
    make_word,
    parse_word,
    word_inverse,
    word_power,
)
from .rep import Rep


class InvalidStringError(ValueError):
    pass


class MuOutOfDomainError(ValueError):
    pass


INF = "inf"


@dataclass(frozen=True)
class StringCheck:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def directed_runs(w: Word) -> list[Path]:
    """Maximal directed pieces of ``w`` as paths (inverse runs are inverted)."""
    out = []
    i, n = 0, len(w.letters)
    while i < n:
        j = i
        inv = w.letters[i].inverse
        while j + 1 < n and w.letters[j + 1].inverse == inv:
            j += 1
        run = w.letters[i : j + 1]
        names = tuple(x.arrow for x in (reversed(run) if inv else run))
        out.append(names)
        i = j + 1
    return out


def is_string(a: AlgebraTable, w: Word) -> StringCheck:
    if w.is_empty:
        return StringCheck(True)
    for x, y in zip(w.letters, w.letters[1:]):
        if x == y.inv():
            return StringCheck(False, f"not reduced: {x.text()} followed by {y.text()}")
    alive = {q.letters for q in j_nonzero_paths(a)}
    for run in directed_runs(w):
        if run not in alive:
            return StringCheck(False, f"{'*'.join(run)} vanishes modulo the socle")
    return StringCheck(True)


def _as_word(a: AlgebraTable, w: Word | str) -> Word:
    return parse_word(w, a.quiver) if isinstance(w, str) else w


def string_module(a: AlgebraTable, c: Word | str) -> Rep:
    """The string module M(c) on the ordered basis z_0, ..., z_n."""
    c = _as_word(a, c)
    check = is_string(a, c)
    if not check:
        raise InvalidStringError(f"{c.text()}: {check.reason}")
    meta = {"kind": "string", "word": c.text()}
    if c.is_empty:
        return Rep(a, {c.source: 1}, {}, meta)
    n = len(c)
    w = c.letters
    labels = [letter_ends(a.quiver, w[i])[1] for i in range(n)] + [c.source]
    mats = {x.name: np.zeros((n + 1, n + 1), dtype=np.int64) for x in a.quiver.arrows}
    for i, x in enumerate(w, start=1):
        # letter w_i joins z_{i-1} and z_i
        if x.inverse:
            mats[x.arrow][i, i - 1] = 1
        else:
            mats[x.arrow][i - 1, i] = 1
    return Rep.from_flat(a, labels, mats, meta)


# ---------------------------------------------------------------------------
# bands

BANDS = {
    "D(1)_0": "beta*alpha^-1",
    "D(1)_1": "beta*alpha^-1",
    "D(2A)_0": "alpha*beta^-1*gamma^-1",
    "D(2A)_1": "alpha*beta^-1*gamma^-1",
    "D(3A)_1": "beta*gamma*delta^-1*eta^-1",
    "D(3A)_2": "beta*gamma*delta^-1*eta^-1",
    "D(3B)_{2,1}": "alpha*beta^-1*eta*delta*gamma^-1",
    "D(3B)_{2,2}": "alpha*beta^-1*gamma^-1",
    "D(3D)_2": "alpha*beta^-1*eta*xi^-1*delta*gamma^-1",
    "D(3K)": "beta*kappa^-1*delta*gamma^-1*lambda*eta^-1",
    "D(3L)": "alpha*beta^-1*delta^-1*lambda^-1",
    "D(3Q)": "alpha*beta^-1*rho*delta^-1*lambda^-1",
}

# string words standing in for M(B, 0, m) / M(B, inf, m); "{B}" is the band,
# "{m-1}" the exponent m - 1
_ZERO = {1: "alpha^-1*(beta*alpha^-1)^{m-1}", 2: "beta^-1*gamma^-1*(alpha*beta^-1*gamma^-1)^{m-1}"}
_INFINITY = {1: "(beta*alpha^-1)^{m-1}*beta"}


@dataclass(frozen=True)
class BandSpec:
    algebra: str
    band: Word
    domain: str  # "k+inf" | "k" | "k*"

    @property
    def length(self) -> int:
        return len(self.band)

    def allows(self, mu, p: int) -> bool:
        if mu == INF:
            return self.domain == "k+inf"
        if mu % p == 0:
            return self.domain in ("k+inf", "k")
        return True

    def domain_text(self) -> str:
        return {"k+inf": "k u {inf}", "k": "k", "k*": "k*"}[self.domain]


def band_of(a: AlgebraTable) -> BandSpec:
    try:
        text = BANDS[a.name]
    except KeyError:
        raise UnknownAlgebraError(f"no band recorded for {a.name}") from None
    domain = {1: "k+inf", 2: "k"}.get(len(a.vertices), "k*")
    return BandSpec(a.name, parse_word(text, a.quiver), domain)


def normalize_mu(mu, p: int):
    """Map user input (int, Fraction, 'inf', math.inf) to an element of F_p or INF."""
    if isinstance(mu, str):
        s = mu.strip().lower()
        if s in ("inf", "infinity", "oo", "∞"):
            return INF
        mu = Fraction(s)
    if isinstance(mu, float):
        if math.isinf(mu):
            return INF
        if not mu.is_integer():
            raise MuOutOfDomainError(f"mu = {mu} is not an element of F_{p}")
        mu = int(mu)
    if isinstance(mu, Fraction):
        if mu.denominator % p == 0:
            raise MuOutOfDomainError(f"mu = {mu} is not defined over F_{p}")
        return mu.numerator * pow(mu.denominator, -1, p) % p
    return int(mu) % p


def _expand(a: AlgebraTable, template: str, m: int) -> Word:
    head, _, rest = template.partition("(")
    # templates have the shape  prefix*(group)^{m-1}  or  (group)^{m-1}*suffix
    group, _, tail = rest.partition(")^{m-1}")
    parts = []
    if head.strip("*"):
        parts.append(parse_word(head.strip("*"), a.quiver))
    g = parse_word(group, a.quiver)
    parts.append(word_power(a.quiver, g, m - 1) if m > 1 else None)
    if tail.strip("*"):
        parts.append(parse_word(tail.strip("*"), a.quiver))
    parts = [x for x in parts if x is not None]
    return concat_words(a.quiver, *parts)


def band_module(a: AlgebraTable, mu, m: int = 1) -> Rep:
    """M(B, mu, m) on the ordered basis z_{0,1..m}, z_{1,1..m}, ..., z_{n-1,1..m}.

    ``mu = 0`` and ``mu = inf`` return the string modules they stand for.
    """
    if m < 1:
        raise ValueError("band multiplicity m must be positive")
    bdata = band_of(a)
    mu = normalize_mu(mu, a.p)
    if not bdata.allows(mu, a.p):
        raise MuOutOfDomainError(f"mu = {mu} lies outside {bdata.domain_text()} for {a.name}")
    nv = len(a.vertices)
    if mu == INF or mu == 0:
        word = _expand(a, (_INFINITY if mu == INF else _ZERO)[nv], m)
        r = string_module(a, word)
        r.meta.update({"kind": "band", "mu": str(mu), "m": m, "tube_boundary": m == 1, "as_string": word.text()})
        return r

    w = bdata.band.letters
    n = len(w)
    size = n * m

    def z(i, j):  # j in 1..m; z_{n,j} = z_{0,j}
        return (i % n) * m + (j - 1)

    labels = [letter_ends(a.quiver, w[i])[1] for i in range(n) for _ in range(m)]
    mats = {x.name: np.zeros((size, size), dtype=np.int64) for x in a.quiver.arrows}
    for i in range(n):
        for j in range(1, m + 1):
            # w_i direct: z_{i,j} goes down; i = n stands for index 0
            ii = i if i else n
            x = w[ii - 1]
            if not x.inverse:
                col = z(ii, j)
                if ii == 1:
                    mats[x.arrow][z(0, j), col] += mu
                    if j < m:
                        mats[x.arrow][z(0, j + 1), col] += 1
                else:
                    mats[x.arrow][z(ii - 1, j), col] += 1
            # w_{i+1} inverse: z_{i,j} goes up
            y = w[i]
            if y.inverse:
                mats[y.arrow][z(i + 1, j), z(i, j)] += 1
    meta = {"kind": "band", "mu": str(mu), "m": m, "tube_boundary": m == 1, "band": bdata.band.text()}
    return Rep.from_flat(a, labels, mats, meta)


# ---------------------------------------------------------------------------
# enumeration


def letter_key(x: Letter) -> tuple[str, bool]:
    return (x.arrow, x.inverse)


def word_key(w: Word) -> tuple:
    return tuple(letter_key(x) for x in w.letters)


def canonical(w: Word) -> Word:
    """The smaller of ``w`` and ``w^-1``; direct letters rank before inverse ones."""
    if w.is_empty:
        return w
    inv = word_inverse(w)
    return w if word_key(w) <= word_key(inv) else inv


def _letters(a: AlgebraTable) -> list[Letter]:
    out = []
    for arrow in sorted(a.quiver.arrows, key=lambda x: x.name):
        out.append(Letter(arrow.name))
        out.append(Letter(arrow.name, True))
    return out


def iter_strings(a: AlgebraTable, max_len: int) -> Iterator[Word]:
    """Every string (both orientations) of length 1..max_len, shortest first."""
    letters = _letters(a)
    layer = [make_word(a.quiver, (x,)) for x in letters]
    layer = [w for w in layer if is_string(a, w)]
    length = 1
    while layer and length <= max_len:
        yield from layer
        if length == max_len:
            return
        nxt = []
        for w in layer:
            for x in letters:
                if letter_ends(a.quiver, x)[1] != w.source:
                    continue
                cand = Word(w.letters + (x,), letter_ends(a.quiver, x)[0], w.target)
                if is_string(a, cand):
                    nxt.append(cand)
        layer = nxt
        length += 1


def enumerate_strings(a: AlgebraTable, max_len: int) -> list[Word]:
    """One representative per {w, w^-1}, ordered by length then letter key."""
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    out = [make_word(a.quiver, (), v) for v in a.vertices]
    seen = set()
    rest = []
    for w in iter_strings(a, max_len):
        c = canonical(w)
        if c.letters not in seen:
            seen.add(c.letters)
            rest.append(c)
    rest.sort(key=lambda w: (len(w), word_key(w)))
    return out + rest
