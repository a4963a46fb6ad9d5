"""Quivers, paths, words and the algebra-presentation language.

Composition is right-to-left throughout: the path written ``w1*w2*...*wn``
first traverses ``wn`` and last ``w1``, so consecutive letters must satisfy
``source(w_i) == target(w_{i+1})``.  This is the only convention under which
the relation ``delta*(beta*lambda*delta)^2`` of D(3L) is composable.

A presentation file looks like::

    algebra "D(2A)_0"
    char any
    vertex 0 1
    arrow alpha 0 0
    arrow beta 0 1
    arrow gamma 1 0
    relations
      alpha^2
      beta * gamma
      alpha * gamma * beta - gamma * beta * alpha

Terms are ``[coeff *] factor (* factor)*`` where a factor is an arrow name or a
parenthesised product, either optionally raised to ``^n``.  Powers are
expanded while parsing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Iterator, Sequence


class PresentationError(ValueError):
    """Base class for malformed quivers, presentations and words."""


class DslSyntaxError(PresentationError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class CompositionError(PresentationError):
    pass


class DuplicateNameError(PresentationError):
    pass


class UnknownVertexError(PresentationError):
    pass


class UnknownArrowError(PresentationError):
    pass


class UnknownAlgebraError(PresentationError, KeyError):
    def __str__(self) -> str:  # KeyError would quote the message
        return str(self.args[0]) if self.args else ""


class CharMismatchError(PresentationError):
    pass


# ---------------------------------------------------------------------------
# quivers and paths


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    """A directed path; ``letters == ()`` is the trivial path at ``source``."""

    letters: tuple[str, ...]
    source: str
    target: str

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def is_trivial(self) -> bool:
        return not self.letters

    def __mul__(self, other: "Path") -> "Path | None":
        """``self * other``: first ``other``, then ``self``; None if not composable."""
        if self.source != other.target:
            return None
        return Path(self.letters + other.letters, other.source, self.target)

    def text(self) -> str:
        if not self.letters:
            return f"e_{self.source}"
        return "*".join(self.letters)

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    _by_name: dict = field(default=None, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            dup = _first_duplicate(self.vertices)
            raise DuplicateNameError(f"vertex {dup!r} declared twice")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise DuplicateNameError(f"arrow {_first_duplicate(names)!r} declared twice")
        for a in self.arrows:
            for v in (a.source, a.target):
                if v not in self.vertices:
                    raise UnknownVertexError(f"arrow {a.name!r} uses undeclared vertex {v!r}")
        object.__setattr__(self, "_by_name", {a.name: a for a in self.arrows})

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownArrowError(f"no arrow named {name!r}") from None

    def has_arrow(self, name: str) -> bool:
        return name in self._by_name

    def arrow_index(self, name: str) -> int:
        return [a.name for a in self.arrows].index(name)

    def out_arrows(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def in_arrows(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def trivial(self, v: str) -> Path:
        if v not in self.vertices:
            raise UnknownVertexError(f"no vertex {v!r}")
        return Path((), v, v)

    def path(self, letters: Sequence[str]) -> Path:
        """Validate and build the path ``letters[0] * ... * letters[-1]``."""
        letters = tuple(letters)
        if not letters:
            raise ValueError("use Quiver.trivial for the empty path")
        arrows = [self.arrow(x) for x in letters]
        for i in range(len(arrows) - 1):
            if arrows[i].source != arrows[i + 1].target:
                raise CompositionError(
                    f"{'*'.join(letters)}: {arrows[i + 1].name} ends at {arrows[i + 1].target} "
                    f"but {arrows[i].name} starts at {arrows[i].source}"
                )
        return Path(letters, arrows[-1].source, arrows[0].target)

    def paths(self, max_len: int) -> list[Path]:
        """All paths of length <= max_len, ordered by length then letters."""
        layer = [self.trivial(v) for v in self.vertices]
        out = list(layer)
        for _ in range(max_len):
            nxt = []
            for q in layer:
                for a in self.in_arrows(q.source):
                    nxt.append(Path(q.letters + (a.name,), a.source, q.target))
            layer = sorted(nxt, key=path_key)
            out.extend(layer)
        return out


def path_key(q: Path) -> tuple:
    return (len(q.letters), q.letters, q.source, q.target)


def _first_duplicate(items: Iterable[str]) -> str:
    seen = set()
    for x in items:
        if x in seen:
            return x
        seen.add(x)
    return ""


def subpaths(q: Path, quiver: Quiver, proper: bool = False) -> Iterator[Path]:
    """All nonempty contiguous subpaths of ``q``."""
    n = len(q.letters)
    for i in range(n):
        for j in range(i + 1, n + 1):
            if proper and (i, j) == (0, n):
                continue
            yield quiver.path(q.letters[i:j])


# ---------------------------------------------------------------------------
# words with formal inverses


@dataclass(frozen=True)
class Letter:
    arrow: str
    inverse: bool = False

    def inv(self) -> "Letter":
        return Letter(self.arrow, not self.inverse)

    def text(self) -> str:
        return self.arrow + ("^-1" if self.inverse else "")


@dataclass(frozen=True)
class Word:
    """A word ``w1 w2 ... wn`` in arrows and formal inverses.

    ``source``/``target`` follow the same right-to-left rule as paths:
    ``s(w) = s(wn)`` and ``e(w) = e(w1)``.  The empty word ``1_u`` has
    ``letters == ()`` and ``source == target == u``.
    """

    letters: tuple[Letter, ...]
    source: str
    target: str

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def is_empty(self) -> bool:
        return not self.letters

    def text(self) -> str:
        if not self.letters:
            return f"1_{self.source}"
        return "*".join(x.text() for x in self.letters)

    def __str__(self) -> str:
        return self.text()


def letter_ends(quiver: Quiver, x: Letter) -> tuple[str, str]:
    """(source, target) of a letter; inverses swap the arrow's endpoints."""
    a = quiver.arrow(x.arrow)
    return (a.target, a.source) if x.inverse else (a.source, a.target)


def make_word(quiver: Quiver, letters: Sequence[Letter], vertex: str | None = None) -> Word:
    letters = tuple(letters)
    if not letters:
        if vertex is None:
            raise ValueError("an empty word needs its vertex")
        quiver.trivial(vertex)
        return Word((), vertex, vertex)
    ends = [letter_ends(quiver, x) for x in letters]
    for i in range(len(letters) - 1):
        if ends[i][0] != ends[i + 1][1]:
            raise CompositionError(
                f"{Word(letters, '', '').text()}: letter {letters[i + 1].text()} ends at "
                f"{ends[i + 1][1]} but {letters[i].text()} starts at {ends[i][0]}"
            )
    return Word(letters, ends[-1][0], ends[0][1])


def word_inverse(w: Word) -> Word:
    """``(w1...wn)^-1 = wn^-1 ... w1^-1``; the empty word is its own inverse."""
    if w.is_empty:
        return w
    return Word(tuple(x.inv() for x in reversed(w.letters)), w.target, w.source)


def word_power(quiver: Quiver, w: Word, n: int) -> Word:
    if n < 0:
        raise ValueError("negative word power")
    if n == 0:
        return make_word(quiver, (), w.target)
    return make_word(quiver, w.letters * n)


def concat_words(quiver: Quiver, *words: Word) -> Word:
    letters: list[Letter] = []
    for w in words:
        letters.extend(w.letters)
    if not letters:
        return words[0]
    return make_word(quiver, letters)


# ---------------------------------------------------------------------------
# relations and presentations


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths with integer coefficients.

    Terms are kept sorted by their letter sequence and signed so that the
    first coefficient is positive; equal paths are merged.
    """

    terms: tuple[tuple[int, Path], ...]

    @classmethod
    def make(cls, terms: Iterable[tuple[int, Path]]) -> "Relation":
        merged: dict[Path, int] = {}
        for c, q in terms:
            merged[q] = merged.get(q, 0) + int(c)
        items = sorted(((c, q) for q, c in merged.items() if c), key=lambda t: t[1].letters)
        if not items:
            raise PresentationError("relation is identically zero")
        ends = {(q.source, q.target) for _, q in items}
        if len(ends) > 1:
            raise CompositionError(
                "relation terms are not parallel: " + ", ".join(q.text() for _, q in items)
            )
        if items[0][0] < 0:
            items = [(-c, q) for c, q in items]
        return cls(tuple(items))

    @property
    def kind(self) -> str:
        return "monomial" if len(self.terms) == 1 else "binomial" if len(self.terms) == 2 else "general"

    @property
    def source(self) -> str:
        return self.terms[0][1].source

    @property
    def target(self) -> str:
        return self.terms[0][1].target

    def text(self) -> str:
        parts: list[str] = []
        for i, (c, q) in enumerate(self.terms):
            mag = abs(c)
            body = " * ".join(q.letters) if q.letters else f"e_{q.source}"
            if mag != 1:
                body = f"{mag} * {body}"
            if i == 0:
                parts.append(body if c > 0 else f"- {body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)


@dataclass(frozen=True)
class Presentation:
    name: str
    quiver: Quiver
    relations: tuple[Relation, ...]
    char_constraint: str = "any"

    def __post_init__(self) -> None:
        if self.char_constraint not in ("any", "2"):
            raise PresentationError(f"char constraint must be 'any' or '2', got {self.char_constraint!r}")

    def check_char(self, p: int) -> None:
        if self.char_constraint == "2" and p != 2:
            raise CharMismatchError(f"{self.name} is only defined in characteristic 2 (got p={p})")

    def serialize(self) -> str:
        lines = [
            f'algebra "{self.name}"',
            f"char {self.char_constraint}",
            "vertex " + " ".join(self.quiver.vertices),
        ]
        lines += [f"arrow {a.name} {a.source} {a.target}" for a in self.quiver.arrows]
        lines.append("relations")
        lines += ["  " + r.text() for r in self.relations]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN = re.compile(
    r"(?P<ws>[ \t]+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\^-1|[*+\-^()])"
)


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text: str, line: int, col0: int = 1) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), col0 + pos))
        pos = m.end()
    return toks


class _Stream:
    def __init__(self, toks: list[_Tok], line: int, end_col: int):
        self.toks = toks
        self.i = 0
        self.line = line
        self.end_col = end_col

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        t = self.peek()
        if t is None:
            raise DslSyntaxError("unexpected end of line", self.line, self.end_col)
        self.i += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> _Tok:
        t = self.next()
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            raise DslSyntaxError(f"expected {want!r}, found {t.text!r}", self.line, t.col)
        return t

    def accept(self, text: str) -> bool:
        t = self.peek()
        if t is not None and t.kind == "op" and t.text == text:
            self.i += 1
            return True
        return False


def _parse_power(s: _Stream) -> int:
    if not s.accept("^"):
        return 1
    t = s.expect("int")
    n = int(t.text)
    if n < 1:
        raise DslSyntaxError("exponent must be positive", s.line, t.col)
    return n


def _parse_product(s: _Stream) -> list[str]:
    letters = _parse_factor(s)
    while s.accept("*"):
        letters += _parse_factor(s)
    return letters


def _parse_factor(s: _Stream) -> list[str]:
    t = s.next()
    if t.kind == "name":
        return [t.text] * _parse_power(s)
    if t.kind == "op" and t.text == "(":
        inner = _parse_product(s)
        s.expect("op", ")")
        return inner * _parse_power(s)
    raise DslSyntaxError(f"expected an arrow name or '(', found {t.text!r}", s.line, t.col)


def _parse_term(s: _Stream) -> tuple[int, list[str], int]:
    t = s.peek()
    col = t.col if t else s.end_col
    coeff = 1
    if t is not None and t.kind == "int":
        s.next()
        coeff = int(t.text)
        s.expect("op", "*")
    return coeff, _parse_product(s), col


def _parse_relation(text: str, quiver: Quiver, line: int, col0: int) -> Relation:
    s = _Stream(_tokenize(text, line, col0), line, col0 + len(text))
    sign = -1 if s.accept("-") else 1
    raw = []
    while True:
        c, letters, col = _parse_term(s)
        raw.append((sign * c, letters, col))
        t = s.peek()
        if t is None:
            break
        if t.kind == "op" and t.text in "+-":
            s.next()
            sign = 1 if t.text == "+" else -1
            continue
        raise DslSyntaxError(f"expected '+', '-' or end of relation, found {t.text!r}", line, t.col)
    terms = []
    for c, letters, col in raw:
        for x in letters:
            if not quiver.has_arrow(x):
                raise DslSyntaxError(f"unknown arrow {x!r}", line, col)
        try:
            terms.append((c, quiver.path(letters)))
        except CompositionError as exc:
            raise CompositionError(f"line {line}, column {col}: {exc}") from None
    try:
        return Relation.make(terms)
    except PresentationError as exc:
        raise type(exc)(f"line {line}: {exc}") from None


def parse_presentation(text: str) -> Presentation:
    """Parse a presentation document (see module docstring for the grammar)."""
    name = None
    char = "any"
    vertices: list[str] = []
    arrows: list[Arrow] = []
    rel_lines: list[tuple[int, int, str]] = []
    in_relations = False
    quiver: Quiver | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        indent = len(body) - len(body.lstrip())
        stripped = body.strip()
        if in_relations:
            rel_lines.append((lineno, indent + 1, stripped))
            continue
        keyword, _, rest = stripped.partition(" ")
        rest = rest.strip()
        if keyword == "algebra":
            m = re.fullmatch(r'"([^"]+)"', rest)
            if not m:
                raise DslSyntaxError('expected algebra "<name>"', lineno, indent + 1)
            name = m.group(1)
        elif keyword == "char":
            if rest not in ("any", "2"):
                raise DslSyntaxError(f"char must be 'any' or '2', found {rest!r}", lineno, indent + 6)
            char = rest
        elif keyword == "vertex":
            ids = rest.split()
            if not ids:
                raise DslSyntaxError("vertex line lists no vertices", lineno, indent + 1)
            for v in ids:
                if v in vertices:
                    raise DuplicateNameError(f"line {lineno}: vertex {v!r} declared twice")
                vertices.append(v)
        elif keyword == "arrow":
            parts = rest.split()
            if len(parts) != 3:
                raise DslSyntaxError("expected: arrow <name> <source> <target>", lineno, indent + 1)
            a, src, tgt = parts
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", a):
                raise DslSyntaxError(f"bad arrow name {a!r}", lineno, indent + 7)
            if any(x.name == a for x in arrows):
                raise DuplicateNameError(f"line {lineno}: arrow {a!r} declared twice")
            for v in (src, tgt):
                if v not in vertices:
                    raise UnknownVertexError(f"line {lineno}: arrow {a!r} uses undeclared vertex {v!r}")
            arrows.append(Arrow(a, src, tgt))
        elif keyword == "relations":
            if rest:
                raise DslSyntaxError("nothing may follow 'relations'", lineno, indent + 11)
            in_relations = True
        else:
            raise DslSyntaxError(f"unknown keyword {keyword!r}", lineno, indent + 1)

    if name is None:
        raise DslSyntaxError("missing 'algebra \"<name>\"' header", 1, 1)
    if not vertices:
        raise DslSyntaxError("no vertices declared", 1, 1)
    quiver = Quiver(tuple(vertices), tuple(arrows))
    relations = tuple(_parse_relation(t, quiver, ln, col) for ln, col, t in rel_lines)
    return Presentation(name, quiver, relations, char)


def parse_word(text: str, quiver: Quiver) -> Word:
    """Parse a word literal such as ``gamma*delta^-1*eta^-1`` or ``1_0``.

    Parenthesised groups may carry a positive power: ``(alpha^-1*gamma*beta)^2*alpha^-1``.
    """
    text = text.strip()
    m = re.fullmatch(r"(?:1|e)_(\S+)", text)
    if m:
        return make_word(quiver, (), m.group(1))
    s = _Stream(_tokenize(text, 1), 1, len(text) + 1)

    def factor() -> list[Letter]:
        t = s.next()
        if t.kind == "name":
            if not quiver.has_arrow(t.text):
                raise DslSyntaxError(f"unknown arrow {t.text!r}", 1, t.col)
            nxt = s.peek()
            if nxt is not None and nxt.kind == "op" and nxt.text == "^-1":
                s.next()
                return [Letter(t.text, True)]
            return [Letter(t.text)] * _parse_power(s)
        if t.kind == "op" and t.text == "(":
            inner = product()
            s.expect("op", ")")
            return inner * _parse_power(s)
        raise DslSyntaxError(f"expected a letter, found {t.text!r}", 1, t.col)

    def product() -> list[Letter]:
        out = factor()
        while s.accept("*"):
            out += factor()
        return out

    letters = product()
    if s.peek() is not None:
        raise DslSyntaxError(f"trailing input {s.peek().text!r}", 1, s.peek().col)
    return make_word(quiver, letters)


# ---------------------------------------------------------------------------
# catalog

CATALOG_FILES = {
    "D(1)_0": "D1_0.alg",
    "D(1)_1": "D1_1.alg",
    "D(2A)_0": "D2A_0.alg",
    "D(2A)_1": "D2A_1.alg",
    "D(3A)_1": "D3A_1.alg",
    "D(3A)_2": "D3A_2.alg",
    "D(3B)_{2,1}": "D3B_21.alg",
    "D(3B)_{2,2}": "D3B_22.alg",
    "D(3D)_2": "D3D_2.alg",
    "D(3K)": "D3K.alg",
    "D(3L)": "D3L.alg",
    "D(3Q)": "D3Q.alg",
}

CATALOG_NAMES = tuple(CATALOG_FILES)


def canonical_name(name: str) -> str:
    """Accept loose spellings such as ``D(3B)_21`` or ``d3b_{2,1}``."""
    if name in CATALOG_FILES:
        return name
    key = re.sub(r"[^0-9a-z]", "", name.lower())
    for cand in CATALOG_FILES:
        if re.sub(r"[^0-9a-z]", "", cand.lower()) == key:
            return cand
    raise UnknownAlgebraError(f"unknown algebra {name!r}; known: {', '.join(CATALOG_FILES)}")


def catalog_text(name: str) -> str:
    fname = CATALOG_FILES[canonical_name(name)]
    return resources.files("dihedral_udr.data.algebras").joinpath(fname).read_text(encoding="utf-8")


_CATALOG_CACHE: dict[str, Presentation] = {}


def catalog(name: str, p: int | None = None) -> Presentation:
    """The built-in presentation ``name``; checks the characteristic when ``p`` is given."""
    key = canonical_name(name)
    if key not in _CATALOG_CACHE:
        _CATALOG_CACHE[key] = parse_presentation(catalog_text(key))
    pres = _CATALOG_CACHE[key]
    if p is not None:
        pres.check_char(p)
    return pres
