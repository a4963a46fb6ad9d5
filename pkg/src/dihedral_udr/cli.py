"""Command-line entry point: ``dihedral-udr`` or ``python -m dihedral_udr``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .algebra import AlgebraTable, build_algebra, catalog_algebra, projective
from .deformation import DEFAULT_CAP, classify_defring, first_order
from .homological import ext1_dim, hom_space, omega_orbit, stable_end_dim, syzygy
from .quiver import CATALOG_NAMES, PresentationError, catalog, canonical_name, parse_presentation
from .rep import Rep, simple
from .strings import band_module, band_of, string_module
from .workbench import (
    MAX_CENSUS_LEN,
    census,
    census_csv,
    finite_dimensional_flag,
    reproduce,
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def _load_algebra(name: str, p: int, algebra_file: str | None) -> AlgebraTable:
    if algebra_file:
        pres = parse_presentation(Path(algebra_file).read_text())
        if name not in (pres.name, "-"):
            raise UsageError(f"{algebra_file} defines {pres.name!r}, not {name!r}")
        return build_algebra(pres, p)
    return catalog_algebra(canonical_name(name), p)


def _module(a: AlgebraTable, kind: str, args: list[str]) -> tuple[Rep, str]:
    """Build a module from CLI tokens such as ``band mu=3 m=1`` or ``string beta*alpha^-1``."""
    kv = dict(x.split("=", 1) for x in args if "=" in x)
    pos = [x for x in args if "=" not in x]
    kind = kind.lower()
    if kind == "string":
        if len(pos) != 1:
            raise UsageError("string needs exactly one word")
        return string_module(a, pos[0]), f"string:{pos[0]}"
    if kind == "band":
        mu = kv.get("mu", pos[0] if pos else None)
        if mu is None:
            raise UsageError("band needs a value of mu")
        m = int(kv.get("m", pos[1] if len(pos) > 1 else 1))
        return band_module(a, mu, m), f"band:{mu}:{m}"
    if kind == "simple":
        if len(pos) != 1:
            raise UsageError("simple needs a vertex")
        return simple(a, pos[0]), f"simple:{pos[0]}"
    if kind in ("proj", "projective"):
        if len(pos) != 1:
            raise UsageError("proj needs a vertex")
        return projective(a, pos[0]), f"proj:{pos[0]}"
    raise UsageError(f"unknown module kind {kind!r} (string, band, simple, proj)")


def _split_pair(tokens: list[str]) -> tuple[list[str], list[str]]:
    """Split ``KIND ARG.. / KIND ARG..`` (or two one-argument specs) into two module specs."""
    if "/" in tokens:
        i = tokens.index("/")
        return tokens[:i], tokens[i + 1 :]
    if len(tokens) == 4:
        return tokens[:2], tokens[2:]
    raise UsageError("give two modules separated by '/', e.g.  simple 0 / string beta")


def _write(text: str, target: str | None) -> None:
    if target in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(target).write_text(text)


def _matrix_text(m: np.ndarray) -> str:
    if m.size == 0:
        return f"  ({m.shape[0]}x{m.shape[1]})"
    return "\n".join("  " + " ".join(f"{int(x):>3}" for x in row) for row in m)


def _print_rep(r: Rep) -> None:
    print(f"{r.algebra.name} over F_{r.p}, dimension vector {r.dim_vector}")
    for name, m in r.mats.items():
        print(f"{name}:")
        print(_matrix_text(m))


# ---------------------------------------------------------------------------
# commands


def cmd_algebras(args) -> int:
    if args.action == "list":
        for name in CATALOG_NAMES:
            pres = catalog(name)
            char = "char 2 only" if pres.char_constraint == "2" else "any char"
            print(f"{name:<14} {len(pres.quiver.vertices)} vertices, {len(pres.quiver.arrows)} arrows, {char}")
        return 0
    if not args.name:
        raise UsageError("algebras show needs a name")
    a = _load_algebra(args.name, args.p, args.algebra_file)
    if args.json:
        print(json.dumps({
            "name": a.name, "p": a.p, "dim": a.dim,
            "basis": [b.text() for b in a.basis],
            "stabilization_length": a.stabilization_length,
        }, indent=2))
        return 0
    print(a.presentation.serialize().rstrip())
    print(f"# dim over F_{a.p}: {a.dim} (stable from path length {a.stabilization_length})")
    print("# basis: " + ", ".join(b.text() for b in a.basis))
    return 0


def cmd_module(args) -> int:
    a = _load_algebra(args.algebra, args.p, args.algebra_file)
    r, _ = _module(a, args.kind, args.args)
    if args.json:
        _write(json.dumps(r.to_json()), args.json)
    else:
        _print_rep(r)
    return 0


def cmd_hom(args) -> int:
    a = _load_algebra(args.algebra, args.p, args.algebra_file)
    s1, s2 = _split_pair(args.modules)
    m, d1 = _module(a, s1[0], s1[1:])
    n, d2 = _module(a, s2[0], s2[1:])
    h = hom_space(m, n)
    out = {"source": d1, "target": d2, "hom": h.dim, "projective": h.dim - h.stable_dim, "stable_hom": h.stable_dim}
    print(json.dumps(out) if args.json else f"dim Hom = {h.dim}, through projectives = {out['projective']}, stable = {h.stable_dim}")
    return 0


def cmd_stend(args) -> int:
    a = _load_algebra(args.algebra, args.p, args.algebra_file)
    r, d = _module(a, args.kind, args.args)
    s = stable_end_dim(r)
    print(json.dumps({"module": d, "stable_end": s}) if args.json else f"dim stable End({d}) = {s}")
    return 0


def cmd_omega(args) -> int:
    a = _load_algebra(args.algebra, args.p, args.algebra_file)
    r, d = _module(a, args.kind, args.args)
    if args.steps:
        orb = omega_orbit(r, args.steps)
        dims = [t.dim_vector for t in orb.terms]
        if args.json:
            print(json.dumps({"module": d, "dims": dims, "period": orb.period, "open": orb.is_open, "zero": orb.reached_zero}))
        else:
            status = f"period {orb.period}" if orb.period else ("reaches 0" if orb.reached_zero else "no repeat found (open)")
            print(f"Omega-orbit of {d}: {status}")
            for i, t in enumerate(dims):
                print(f"  Omega^{i}: {t}")
        return 0
    res = syzygy(r)
    if args.json:
        print(json.dumps(res.omega.to_json()))
    else:
        print(f"projective cover: dimension vector {res.cover.dim_vector}")
        _print_rep(res.omega)
    return 0


def cmd_ext(args) -> int:
    a = _load_algebra(args.algebra, args.p, args.algebra_file)
    if "/" in args.modules or len(args.modules) == 4:
        s1, s2 = _split_pair(args.modules)
    else:
        s1 = s2 = args.modules
    m, d1 = _module(a, s1[0], s1[1:])
    n, d2 = _module(a, s2[0], s2[1:])
    e = ext1_dim(m, n)
    extra = {}
    if s1 == s2:
        extra["cocycle_count"] = first_order(m).ext1
    if args.json:
        print(json.dumps({"source": d1, "target": d2, "ext1": e, **extra}))
    else:
        print(f"dim Ext^1({d1}, {d2}) = {e}")
    return 0


def cmd_classify(args) -> int:
    a = _load_algebra(args.algebra, args.p, args.algebra_file)
    r, d = _module(a, args.kind, args.args)
    rep = classify_defring(r, args.cap)
    if args.json:
        _write(json.dumps({"report": "classify", "algebra": a.name, "p": a.p, "module": d, **rep.to_json()}, indent=2), args.json)
        return 0
    print(f"{a.name} over F_{a.p}, {d}")
    print(f"  stable End dim : {rep.stable_end}")
    if rep.ext1 is not None:
        print(f"  Ext^1 dim      : {rep.ext1}")
    line = f"  R              : {rep.verdict}"
    if rep.lift_status:
        line += f" ({rep.lift_status})"
    print(line)
    if rep.obstruction_order:
        print(f"  obstruction    : no lift over F_p[t]/(t^{rep.obstruction_order})")
    if rep.certificate:
        print(f"  certificate    : {rep.certificate}")
    for n in rep.notes:
        print(f"  note           : {n}")
    return 0


def cmd_census(args) -> int:
    if args.max_len > MAX_CENSUS_LEN:
        raise UsageError(f"--max-len is capped at {MAX_CENSUS_LEN}")
    a = _load_algebra(args.algebra, args.p, None)
    rows = census(a.name, a.p, args.max_len, args.cap)
    flag = finite_dimensional_flag(rows)
    if args.json:
        _write(json.dumps({"report": "census", "algebra": a.name, "p": a.p, "max_len": args.max_len,
                           "finite_dimensional": flag, "rows": [asdict(r) for r in rows]}, indent=2), args.json)
    if args.csv or not args.json:
        _write(census_csv(rows), args.csv)
    return 0


def cmd_reproduce(args) -> int:
    rep = reproduce(args.p, args.cap, args.max_len)
    if args.json:
        _write(json.dumps(rep.to_json(), indent=2), args.json)
    if args.csv:
        _write(rep.to_csv(), args.csv)
    for name, checks in rep.scenarios().items():
        good = sum(c.ok for c in checks)
        print(f"{'PASS' if good == len(checks) else 'FAIL'}  {name:<20} {good}/{len(checks)}")
    for note in rep.notes:
        print(f"note: {note}")
    bad = [c for c in rep.checks if not c.ok]
    for c in bad:
        print(f"MISMATCH {c.scenario} {c.algebra} p={c.p} {c.module}: expected {c.expected}, got {c.actual} {c.note}".rstrip())
    return 0 if not bad else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=5, help="characteristic of the ground field (prime, default 5)")
    common.add_argument("--algebra-file", help="presentation file to use instead of the catalog")
    common.add_argument("--json", nargs="?", const="-", default=None, metavar="FILE",
                        help="emit JSON (to FILE, or stdout when no file is given)")

    parser = argparse.ArgumentParser(prog="dihedral-udr", description="Deformation rings of modules over dihedral-type algebras of polynomial growth.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebras", parents=[common], help="list or show catalog algebras")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_algebras)

    def module_cmd(name, func, help_):
        q = sub.add_parser(name, parents=[common], help=help_)
        q.add_argument("algebra")
        q.add_argument("kind", help="string | band | simple | proj")
        q.add_argument("args", nargs="*", help="word, vertex, or mu=<value> m=<int>")
        q.set_defaults(func=func)
        return q

    module_cmd("module", cmd_module, "build and print a module")
    module_cmd("stend", cmd_stend, "dimension of the stable endomorphism ring")
    q = module_cmd("omega", cmd_omega, "syzygy, or the Omega-orbit with --steps")
    q.add_argument("--steps", type=int, default=0)
    q = module_cmd("classify", cmd_classify, "classify the universal deformation ring")
    q.add_argument("--cap", type=int, default=DEFAULT_CAP, help="lift search cap (order of t)")

    for name, func, help_ in (("hom", cmd_hom, "Hom spaces between two modules"), ("ext", cmd_ext, "dim Ext^1 between modules")):
        q = sub.add_parser(name, parents=[common], help=help_)
        q.add_argument("algebra")
        q.add_argument("modules", nargs="+", help="KIND ARG [/ KIND ARG]")
        q.set_defaults(func=func)

    q = sub.add_parser("census", parents=[common], help="classify all short strings and band boundary modules")
    q.add_argument("algebra")
    q.add_argument("--max-len", type=int, default=6)
    q.add_argument("--cap", type=int, default=DEFAULT_CAP)
    q.add_argument("--csv", nargs="?", const="-", default=None, metavar="FILE")
    q.set_defaults(func=cmd_census)

    q = sub.add_parser("reproduce", parents=[common], help="run every expectation and report mismatches")
    q.add_argument("--max-len", type=int, default=6)
    q.add_argument("--cap", type=int, default=DEFAULT_CAP)
    q.add_argument("--csv", nargs="?", const=None, default=None, metavar="FILE")
    q.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, PresentationError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
