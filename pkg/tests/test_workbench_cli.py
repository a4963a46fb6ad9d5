import csv
import io
import json

import jsonschema
import pytest

from dihedral_udr.algebra import catalog_algebra
from dihedral_udr.cli import main
from dihedral_udr.deformation import classify_defring
from dihedral_udr.quiver import parse_word
from dihedral_udr.strings import canonical
from dihedral_udr.workbench import (
    CSV_COLUMNS,
    TUBE_STRINGS_2A,
    build_module,
    census,
    census_csv,
    report_schema,
    reproduce,
)

SCHEMA = report_schema()


def run(capsys, *argv):
    code = main([str(x) for x in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_schema_is_a_valid_schema():
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


# ---------------------------------------------------------------------------
# reproduction harness


@pytest.mark.parametrize("p", [2, 13])
def test_reproduce_exit_code_and_json(tmp_path, capsys, p):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "reproduce", "--p", p, "--json", target)
    assert code == 0, out
    data = json.loads(target.read_text())
    jsonschema.validate(data, SCHEMA)
    assert data["ok"] and data["p"] == p
    assert "MISMATCH" not in out


def test_reproduce_at_five_in_process():
    rep = reproduce(5)
    assert rep.ok
    jsonschema.validate(rep.to_json(), SCHEMA)
    names = {s["name"] for s in rep.to_json()["scenarios"]}
    assert names == {"nonperiodic", "tube", "band", "omega", "omega-rule", "char2", "invariants", "finite-dimensional"}
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0][:3] == ["scenario", "algebra", "p"] and len(rows) == len(rep.checks) + 1


def test_reproduce_at_three_notes_vacuity():
    rep = reproduce(3, scenarios=("band",))
    assert rep.ok
    assert any("not a square mod 3" in n for n in rep.notes)
    # no unit mu is excluded by mu^2 = -1 at p = 3
    for c in rep.checks:
        if c.algebra in ("D(3A)_2", "D(3B)_{2,2}", "D(3D)_2", "D(3L)"):
            assert c.expected["verdict"] == "k[[t]]"


def test_reproduce_reports_mismatches(monkeypatch, capsys):
    from dihedral_udr import workbench

    real = workbench.nonperiodic_expectations

    def wrong(p):
        exps = real(p)
        exps[0].verdict = "k"
        return exps

    monkeypatch.setattr(workbench, "nonperiodic_expectations", wrong)
    rep = workbench.reproduce(5, scenarios=("nonperiodic",))
    assert not rep.ok
    assert sum(not c.ok for c in rep.checks) == 1


# ---------------------------------------------------------------------------
# classify


def test_classify_examples(capsys):
    code, out, _ = run(capsys, "classify", "D(3B)_{2,1}", "string", "delta*gamma^-1", "--p", 5, "--json")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    assert data["verdict"] == "k"

    code, out, _ = run(capsys, "classify", "D(3Q)", "band", "mu=3", "m=1", "--p", 13, "--json")
    data = json.loads(out)
    assert data["verdict"] == "k[[t]]" and data["lift_status"] == "certified"

    code, out, _ = run(capsys, "classify", "D(2A)_0", "proj", "0")
    assert code == 0 and "versal-only" in out and "stable End dim : 0" in out


def test_classify_text_shows_evidence(capsys):
    _, out, _ = run(capsys, "classify", "D(2A)_0", "simple", "0")
    assert "k[[t]]/(t^2)" in out and "t^3" in out


# ---------------------------------------------------------------------------
# census


def test_rigid_census_simples(capsys):
    rows = census("D(3K)", 5, max_len=4)
    by_module = {r.module: r for r in rows}
    for u in "012":
        assert by_module[f"string:1_{u}"].verdict == "k"
    code, out, _ = run(capsys, "census", "D(3K)", "--p", 5, "--max-len", 4)
    assert code == 0
    parsed = list(csv.DictReader(io.StringIO(out)))
    assert list(parsed[0]) == CSV_COLUMNS and len(parsed) == len(rows)


def test_two_vertex_census_tube_strings():
    a = catalog_algebra("D(2A)_0", 5)
    rows = {r.module: r for r in census("D(2A)_0", 5, max_len=6)}
    seen = 0
    for desc in TUBE_STRINGS_2A:
        w = parse_word(desc.split(":", 1)[1], a.quiver)
        if len(w) > 6:
            continue
        assert rows[f"string:{canonical(w).text()}"].stable_end > 1
        seen += 1
    assert seen >= 4


def test_census_is_deterministic_and_capped(capsys):
    first = census_csv(census("D(3L)", 5, max_len=5))
    assert first == census_csv(census("D(3L)", 5, max_len=5))
    assert first.splitlines()[0] == ",".join(CSV_COLUMNS)
    code, _, err = run(capsys, "census", "D(3L)", "--max-len", 13)
    assert code == 2 and "capped" in err


def test_census_json(capsys):
    code, out, _ = run(capsys, "census", "D(1)_0", "--p", 5, "--max-len", 3, "--json")
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    assert data["finite_dimensional"] is False  # band modules give k[[t]]


def test_orbit_labels_group_syzygies():
    rows = census("D(1)_0", 5, max_len=2)
    band = {r.module: r.orbit for r in rows if r.module.startswith("band:")}
    # Omega swaps mu and -mu
    assert band["band:1:1"] == band["band:4:1"] != band["band:2:1"]
    assert band["band:2:1"] == band["band:3:1"]


@pytest.mark.parametrize("name", ["D(3A)_2", "D(3Q)"])
def test_classify_agrees_with_census(name):
    a = catalog_algebra(name, 5)
    rows = census(name, 5, max_len=4)
    for r in rows[::3]:
        rep = classify_defring(build_module(a, r.module))
        assert (rep.verdict, rep.stable_end, rep.ext1) == (r.verdict, r.stable_end, r.ext1)


# ---------------------------------------------------------------------------
# other commands


def test_algebra_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "algebras", "list")
    assert code == 0 and len(out.splitlines()) == 12
    code, out, _ = run(capsys, "algebras", "show", "D(1)_0", "--json")
    assert json.loads(out)["basis"] == ["e_0", "alpha", "beta", "alpha*beta"]
    path = tmp_path / "cycle.alg"
    path.write_text('algebra "cycle"\nchar any\nvertex 0 1\narrow a 0 1\narrow b 1 0\nrelations\n  a*b*a\n  b*a*b\n')
    code, out, _ = run(capsys, "algebras", "show", "cycle", "--algebra-file", path, "--json")
    assert code == 0 and json.loads(out)["dim"] == 6


def test_module_commands(capsys):
    code, out, _ = run(capsys, "module", "D(2A)_0", "string", "beta", "--json")
    data = json.loads(out)
    assert data["dims"] == {"0": 1, "1": 1} and data["arrows"]["beta"] == [[1]]
    _, out, _ = run(capsys, "stend", "D(2A)_0", "simple", "1", "--json")
    assert json.loads(out)["stable_end"] == 1
    _, out, _ = run(capsys, "omega", "D(1)_0", "band", "mu=1", "--steps", 4, "--json")
    assert json.loads(out)["period"] == 2
    _, out, _ = run(capsys, "omega", "D(1)_0", "simple", "0", "--json")
    assert sum(json.loads(out)["dims"].values()) == 3
    _, out, _ = run(capsys, "ext", "D(1)_0", "simple", "0", "--json")
    assert json.loads(out)["ext1"] == json.loads(out)["cocycle_count"] == 2
    _, out, _ = run(capsys, "hom", "D(2A)_0", "simple", "0", "/", "simple", "0", "--json")
    assert json.loads(out)["stable_hom"] == 1


def test_errors_exit_with_two(capsys):
    assert run(capsys, "classify", "D(2A)_0", "string", "beta*gamma")[0] == 2
    assert run(capsys, "classify", "D(3K)", "band", "mu=0")[0] == 2
    assert run(capsys, "module", "D(1)_1", "simple", "0", "--p", 5)[0] == 2
    assert run(capsys, "module", "D(9Q)", "simple", "0")[0] == 2
    code, _, err = run(capsys, "classify", "D(1)_0", "wiggle", "0")
    assert code == 2 and "unknown module kind" in err
