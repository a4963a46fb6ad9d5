"""Census and reproduction harness over the catalog.

The expectation table below records, per algebra, the modules whose
deformation rings are known in closed form together with the expected
stable-End dimension, Ext^1 dimension and verdict.  ``reproduce`` recomputes
all of them and reports mismatches.
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import asdict, dataclass, field
from importlib import resources

from .algebra import AlgebraTable, catalog_algebra, projective
from .deformation import DEFAULT_CAP, classify_defring, first_order
from .homological import ext1_dim, omega, projective_cover, stable_end_dim
from .quiver import CATALOG_NAMES, canonical_name
from .rep import Rep, hom_dim, is_isomorphic, simple
from .strings import INF, band_module, band_of, enumerate_strings, normalize_mu, string_module, word_inverse

CHAR2_ONLY = ("D(1)_1", "D(2A)_1")


# ---------------------------------------------------------------------------
# module descriptors


def build_module(a: AlgebraTable, descriptor: str) -> Rep:
    """Build a module from ``string:<word>``, ``band:<mu>[:<m>]``, ``simple:<v>`` or ``proj:<v>``."""
    kind, _, rest = descriptor.partition(":")
    kind = kind.strip().lower()
    if kind == "string":
        return string_module(a, rest)
    if kind == "band":
        mu, _, m = rest.partition(":")
        return band_module(a, mu, int(m) if m else 1)
    if kind == "simple":
        return simple(a, rest.strip())
    if kind in ("proj", "projective"):
        r = projective(a, rest.strip())
        r.meta["kind"] = "projective"
        return r
    raise ValueError(f"unknown module descriptor {descriptor!r}")


# ---------------------------------------------------------------------------
# expectations

GROUPS = {
    "local": ("D(1)_0", "D(1)_1"),
    "two": ("D(2A)_0", "D(2A)_1"),
    "rigid": ("D(3A)_1", "D(3K)"),
    "split": ("D(3A)_2", "D(3B)_{2,1}", "D(3B)_{2,2}", "D(3D)_2", "D(3L)", "D(3Q)"),
}

# representatives of the Omega-orbits in the non-periodic component
NONPERIODIC = {
    "D(1)_0": ["simple:0"],
    "D(1)_1": ["simple:0"],
    "D(2A)_0": ["simple:0", "string:beta"],
    "D(2A)_1": ["simple:0", "string:beta"],
    "D(3A)_1": ["simple:1", "string:beta", "string:eta"],
    "D(3A)_2": ["simple:1", "string:beta", "string:eta"],
    "D(3B)_{2,1}": ["simple:1", "simple:0", "string:eta"],
    "D(3B)_{2,2}": ["string:gamma*delta^-1", "simple:0", "string:gamma"],
    "D(3D)_2": ["simple:1", "simple:0", "simple:2"],
    "D(3K)": ["simple:1", "simple:0", "simple:2"],
    "D(3L)": ["string:beta", "simple:0", "string:delta*beta"],
    "D(3Q)": ["string:delta", "simple:0", "simple:1"],
}

# boundary representatives of 3-tubes; for the split group T0, T1, T2
TUBES = {
    "D(2A)_0": ["simple:1"],
    "D(2A)_1": ["simple:1"],
    "D(3A)_1": ["simple:0", "simple:2"],
    "D(3K)": ["string:gamma", "string:lambda"],
    "D(3A)_2": ["simple:0", "string:gamma*delta^-1*eta^-1*delta^-1", "string:gamma*delta^-1*eta^-1"],
    "D(3B)_{2,1}": ["simple:2", "string:delta*gamma^-1", "string:delta*gamma^-1*alpha*beta^-1"],
    "D(3B)_{2,2}": ["string:delta^-1", "simple:1", "string:beta*alpha^-1"],
    "D(3D)_2": ["string:gamma^-1", "string:gamma^-1*alpha*beta^-1", "string:gamma^-1*alpha*beta^-1*eta*xi^-1"],
    "D(3L)": ["simple:2", "string:delta", "string:delta*beta*alpha^-1"],
    "D(3Q)": ["simple:2", "string:delta*rho^-1", "string:delta*rho^-1*beta*alpha^-1"],
}

# the strings (alpha^-1 gamma beta)^(j-1) alpha^-1 ... of the D(2A) tube, j = 1, 2
TUBE_STRINGS_2A = [
    "string:alpha^-1",
    "string:alpha^-1*gamma*beta*alpha^-1",
    "string:alpha^-1*gamma",
    "string:alpha^-1*gamma*beta*alpha^-1*gamma",
    "string:alpha^-1*gamma*beta*alpha^-1*beta^-1",
    "string:(alpha^-1*gamma*beta)^2*alpha^-1*beta^-1",
]


@dataclass
class Expectation:
    scenario: str
    algebra: str
    p: int
    module: str
    tag: str
    stable_end: int | str  # exact value or ">=2"
    ext1: int | None = None
    verdict: str | None = None
    lift_status: str | None = None


def default_prime(name: str, p: int) -> int:
    return 2 if name in CHAR2_ONLY else p


def group_of(name: str) -> str:
    for g, names in GROUPS.items():
        if name in names:
            return g
    raise KeyError(name)


def nonperiodic_expectations(p: int) -> list[Expectation]:
    out = []
    for name, mods in NONPERIODIC.items():
        q = default_prime(name, p)
        g = group_of(name)
        for i, d in enumerate(mods):
            if g == "local":
                ext, verdict = 2, "Lambda"
            elif g == "two":
                ext, verdict = 1, "k[[t]]/(t^2)"
            elif g == "rigid" or i == 0:
                ext, verdict = 0, "k"
            else:
                ext, verdict = 1, "k[[t]]/(t^2)"
            out.append(Expectation("nonperiodic", name, q, d, f"non-periodic component, V{i}", 1, ext, verdict))
    return out


def tube_expectations(p: int) -> list[Expectation]:
    out = []
    for name, mods in TUBES.items():
        q = default_prime(name, p)
        g = group_of(name)
        for i, d in enumerate(mods):
            if g == "split" and i == 2:
                out.append(Expectation("tube", name, q, d, "3-tube, T2", 1, 1, "k[[t]]", "certified"))
            else:
                label = f"T{i}" if g == "split" else "T0 (boundary)"
                out.append(Expectation("tube", name, q, d, f"3-tube, {label}", 1, 0, "k"))
        if g == "two":
            for d in TUBE_STRINGS_2A:
                out.append(Expectation("tube", name, q, d, "3-tube, T_ij", ">=2", None, "versal-only"))
    return out


def band_domain(a: AlgebraTable) -> list:
    bdata = band_of(a)
    mus: list = list(range(1, a.p))
    if bdata.domain in ("k", "k+inf"):
        mus = [0] + mus
    if bdata.domain == "k+inf":
        mus.append(INF)
    return mus


def band_passes(name: str, mu, p: int) -> bool:
    """Whether M(B, mu, 1) has stable End k, per algebra group."""
    g = group_of(name)
    if name in ("D(1)_1", "D(2A)_1"):
        return mu != INF
    if g in ("local", "two", "rigid"):
        return p != 2 and mu not in (0, INF)
    if mu in (0, INF):
        return False
    sq = mu * mu % p
    if name in ("D(3B)_{2,1}", "D(3Q)"):
        return sq != 1
    return sq != p - 1


def band_expectations(p: int, names=CATALOG_NAMES) -> list[Expectation]:
    out = []
    for name in names:
        q = default_prime(name, p)
        a = catalog_algebra(name, q)
        for mu in band_domain(a):
            if band_passes(name, mu, q):
                out.append(Expectation("band", name, q, f"band:{mu}:1", "1-tube boundary", 1, 1, "k[[t]]", "certified"))
            else:
                out.append(Expectation("band", name, q, f"band:{mu}:1", "1-tube boundary, excluded", "!=1", None, "versal-only"))
    return out


def omega_rule(name: str, mu: int, p: int):
    """Image of the band parameter under Omega."""
    g = group_of(name)
    if name in CHAR2_ONLY:
        return (1 - mu) % p
    if g in ("local", "two", "rigid"):
        return (-mu) % p
    if name in ("D(3B)_{2,1}", "D(3Q)"):
        return pow(mu, -1, p)
    return (-pow(mu, -1, p)) % p


# ---------------------------------------------------------------------------
# running expectations


@dataclass
class Check:
    scenario: str
    algebra: str
    p: int
    module: str
    tag: str
    expected: dict
    actual: dict
    ok: bool
    note: str = ""


def _compare(exp: Expectation, rep) -> tuple[dict, bool]:
    actual = {
        "stable_end": rep.stable_end,
        "ext1": rep.ext1,
        "verdict": rep.verdict,
        "lift_status": rep.lift_status,
    }
    ok = True
    if exp.stable_end == ">=2":
        ok &= rep.stable_end >= 2
    elif exp.stable_end == "!=1":
        ok &= rep.stable_end != 1
    else:
        ok &= rep.stable_end == exp.stable_end
    if exp.ext1 is not None:
        ok &= rep.ext1 == exp.ext1
    if exp.verdict is not None:
        ok &= rep.verdict == exp.verdict
    if exp.lift_status is not None:
        ok &= rep.lift_status == exp.lift_status
    return actual, ok


def run_expectation(exp: Expectation, cap: int = DEFAULT_CAP) -> Check:
    a = catalog_algebra(exp.algebra, exp.p)
    v = build_module(a, exp.module)
    rep = classify_defring(v, cap)
    actual, ok = _compare(exp, rep)
    expected = {k: val for k, val in asdict(exp).items() if k in ("stable_end", "ext1", "verdict", "lift_status") and val is not None}
    return Check(exp.scenario, exp.algebra, exp.p, exp.module, exp.tag, expected, actual, ok)


def omega_checks(p: int, cap: int = DEFAULT_CAP) -> list[Check]:
    """Omega preserves stable End k and the verdict; band parameters follow the expected rule."""
    out = []
    exps = nonperiodic_expectations(p) + tube_expectations(p) + band_expectations(p)
    for exp in exps:
        if exp.stable_end != 1:
            continue
        a = catalog_algebra(exp.algebra, exp.p)
        v = build_module(a, exp.module)
        w = omega(v)
        r0 = classify_defring(v, cap)
        r1 = classify_defring(w, cap)
        ok = r1.stable_end == 1 and r1.verdict == r0.verdict
        out.append(Check("omega", exp.algebra, exp.p, f"Omega({exp.module})", exp.tag,
                         {"stable_end": 1, "verdict": r0.verdict}, {"stable_end": r1.stable_end, "verdict": r1.verdict}, ok))
    for name in CATALOG_NAMES:
        q = default_prime(name, p)
        a = catalog_algebra(name, q)
        for mu in band_domain(a):
            if mu == INF or (mu == 0 and name not in CHAR2_ONLY):
                continue
            target = omega_rule(name, mu, q)
            v = band_module(a, mu, 1)
            res = is_isomorphic(omega(v), band_module(a, target, 1))
            out.append(Check("omega-rule", name, q, f"band:{mu}:1", "Omega on band parameters",
                             {"omega": f"band:{target}:1"}, {"isomorphic": res.answer}, res.answer == "yes"))
    return out


def invariant_checks(p: int, samples: int = 30, max_len: int = 6, seed: int = 0) -> list[Check]:
    """Cross-checks between independent computations on random string modules."""
    out = []
    rng = random.Random(seed)
    for name in CATALOG_NAMES:
        q = default_prime(name, p)
        a = catalog_algebra(name, q)
        strings = enumerate_strings(a, max_len)
        pick = strings if len(strings) <= samples else rng.sample(strings, samples)
        bad = []
        for w in pick:
            v = string_module(a, w)
            if first_order(v).ext1 != ext1_dim(v, v):
                bad.append(f"{w.text()}: ext1")
            cover = projective_cover(v)[0]
            if omega(v).dim != cover.dim - v.dim:
                bad.append(f"{w.text()}: omega dim")
            if sum(hom_dim(projective(a, u), v) for u in a.vertices) != v.dim:
                bad.append(f"{w.text()}: Hom(A, V)")
            if is_isomorphic(v, string_module(a, word_inverse(w))).answer != "yes":
                bad.append(f"{w.text()}: inverse word")
        out.append(Check("invariants", name, q, f"{len(pick)} random strings", "cross-oracle invariants",
                         {"failures": 0}, {"failures": len(bad)}, not bad, "; ".join(bad[:5])))
    return out


# ---------------------------------------------------------------------------
# census


@dataclass
class CensusRow:
    algebra: str
    p: int
    module: str
    dims: str
    stable_end: int
    ext1: int | None
    verdict: str
    lift_status: str | None
    orbit: str = ""


CSV_COLUMNS = ["algebra", "p", "module", "dims", "stable_end", "ext1", "verdict", "lift_status", "orbit"]
MAX_CENSUS_LEN = 12


def census(name: str, p: int, max_len: int = 6, cap: int = DEFAULT_CAP) -> list[CensusRow]:
    """All strings up to ``max_len`` and all band boundary modules, classified."""
    if max_len > MAX_CENSUS_LEN:
        raise ValueError(f"max_len is capped at {MAX_CENSUS_LEN}")
    a = catalog_algebra(canonical_name(name), p)
    mods: list[tuple[str, Rep]] = []
    for w in enumerate_strings(a, max_len):
        mods.append((f"string:{w.text()}", string_module(a, w)))
    for mu in band_domain(a):
        mods.append((f"band:{mu}:1", band_module(a, mu, 1)))
    rows = []
    for desc, v in mods:
        rep = classify_defring(v, cap)
        rows.append(CensusRow(a.name, p, desc, ",".join(map(str, v.dim_vector)), rep.stable_end, rep.ext1,
                              rep.verdict, rep.lift_status))
    _assign_orbits(rows, [v for _, v in mods])
    return rows


def _assign_orbits(rows: list[CensusRow], mods: list[Rep]) -> None:
    keep = [i for i, r in enumerate(rows) if r.stable_end == 1]
    parent = {i: i for i in keep}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    by_dims: dict[tuple, list[int]] = {}
    for i in keep:
        by_dims.setdefault(mods[i].dim_vector, []).append(i)
    for i in keep:
        w = omega(mods[i])
        for j in by_dims.get(w.dim_vector, []):
            if find(i) != find(j) and is_isomorphic(w, mods[j]).answer == "yes":
                parent[find(i)] = find(j)
    labels: dict[int, str] = {}
    for i in keep:
        r = find(i)
        if r not in labels:
            labels[r] = f"O{len(labels) + 1}"
        rows[i].orbit = labels[r]


def finite_dimensional_flag(rows: list[CensusRow]) -> bool | None:
    """True when every classified ring in the census is finite-dimensional.

    ``None`` if some module with stable End k could not be classified.
    """
    verdicts = [r.verdict for r in rows if r.stable_end == 1]
    if "k[[t]]" in verdicts:
        return False
    if "unknown" in verdicts:
        return None
    return True


def census_csv(rows: list[CensusRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        d = asdict(r)
        w.writerow(["" if d[c] is None else d[c] for c in CSV_COLUMNS])
    return buf.getvalue()


def finite_dimensional_checks(max_len: int = 6, cap: int = DEFAULT_CAP) -> list[Check]:
    expected_true = {"D(1)_0", "D(2A)_0", "D(3A)_1", "D(3K)"}
    out = []
    for name in CATALOG_NAMES:
        rows = census(name, 2, max_len, cap)
        flag = finite_dimensional_flag(rows)
        exp = name in expected_true
        out.append(Check("finite-dimensional", name, 2, f"census max_len {max_len}", "finite-dimensionality at char 2",
                         {"flag": exp}, {"flag": flag}, flag is exp))
    return out


# ---------------------------------------------------------------------------
# reproduction


@dataclass
class Report:
    p: int
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def scenarios(self) -> dict[str, list[Check]]:
        out: dict[str, list[Check]] = {}
        for c in self.checks:
            out.setdefault(c.scenario, []).append(c)
        return out

    def to_json(self) -> dict:
        return {
            "report": "reproduce",
            "p": self.p,
            "ok": self.ok,
            "notes": self.notes,
            "scenarios": [
                {"name": name, "ok": all(c.ok for c in checks), "checks": [asdict(c) for c in checks]}
                for name, checks in self.scenarios().items()
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["scenario", "algebra", "p", "module", "tag", "expected", "actual", "ok"])
        for c in self.checks:
            w.writerow([c.scenario, c.algebra, c.p, c.module, c.tag, json.dumps(c.expected, sort_keys=True),
                        json.dumps(c.actual, sort_keys=True), c.ok])
        return buf.getvalue()


SCENARIOS = ("nonperiodic", "tube", "band", "omega", "char2", "invariants", "finite-dimensional")


def reproduce(p: int = 5, cap: int = DEFAULT_CAP, max_len: int = 6, scenarios=SCENARIOS, samples: int = 30) -> Report:
    from .linalg import PrimeField

    PrimeField(p)
    rep = Report(p)
    sel = set(scenarios)
    if p == 2:
        rep.notes.append("p = 2: every algebra is run in characteristic 2")
    if p % 4 == 3:
        rep.notes.append(f"-1 is not a square mod {p}: the mu^2 = -1 exclusions are vacuous")
    if p != 2:
        rep.notes.append("D(1)_1 and D(2A)_1 exist only in characteristic 2 and are run at p = 2")
    if "nonperiodic" in sel:
        rep.checks += [run_expectation(e, cap) for e in nonperiodic_expectations(p)]
    if "tube" in sel:
        rep.checks += [run_expectation(e, cap) for e in tube_expectations(p)]
    if "band" in sel:
        rep.checks += [run_expectation(e, cap) for e in band_expectations(p)]
    if "omega" in sel:
        rep.checks += omega_checks(p, cap)
    if "char2" in sel and p != 2:
        for e in band_expectations(2, ("D(1)_0", "D(2A)_0", "D(1)_1", "D(2A)_1")):
            c = run_expectation(e, cap)
            c.scenario = "char2"
            rep.checks.append(c)
    if "invariants" in sel:
        rep.checks += invariant_checks(p, samples, max_len)
    if "finite-dimensional" in sel:
        rep.checks += finite_dimensional_checks(max_len, cap)
    return rep


def report_schema() -> dict:
    return json.loads(resources.files("dihedral_udr.data").joinpath("report.schema.json").read_text())
