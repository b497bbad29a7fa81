from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from opad.cli import main, parse_map_literal, schouten_sign
from opad.formula_gen import Formula, bracket_formula
from opad.instances import fixture_path


@pytest.fixture
def run(tmp_path, monkeypatch):
    monkeypatch.setenv("OPAD_CACHE_DIR", str(tmp_path / "cache"))
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, list(args))

    return invoke


def _config(tmp_path, **fields):
    data = {"name": "h", "basis": ["x", "y", "z"], "brackets": {"[x,y]": "z"}, "char": 0, "truncation": 3, "max_degree": 3}
    data.update(fields)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    return str(path)


def test_lk(run):
    res = run("paths", "lk", "--tau", "0,1,2,3", "--pi", "0,1,2,3")
    assert res.exit_code == 0 and res.output.strip() == "4"
    res = run("paths", "lk", "--tau", "0,1", "--pi", "1,2", "--m", "2")
    assert res.output.strip() == "1"


def test_malformed_map_is_usage_error(run):
    res = run("paths", "lk", "--tau", "0,x", "--pi", "0,1")
    assert res.exit_code == 2
    res = run("paths", "lk", "--tau", "1,0", "--pi", "0,1")
    assert res.exit_code == 2


def test_parse_map_literal():
    assert parse_map_literal("0,0,2", 3).values == (0, 0, 2)


def test_delannoy(run):
    assert run("paths", "delannoy", "-p", "0", "-q", "0").output.strip() == "3"
    assert run("paths", "delannoy", "-p", "1", "-q", "1").output.strip() == "13"
    listed = run("paths", "delannoy", "-p", "0", "-q", "0", "--list").output.strip().splitlines()
    assert len(listed) == 4 and listed[-1] == "3"


def test_smooth_uses_cache(run, tmp_path):
    first = run("paths", "smooth", "-p", "2", "-q", "2", "-n", "2")
    assert first.exit_code == 0
    assert first.output.strip().splitlines()[-1] == "4 paths"
    assert (tmp_path / "cache").exists()
    assert run("paths", "smooth", "-p", "2", "-q", "2", "-n", "2").output == first.output
    one = run("paths", "smooth", "-p", "1", "-q", "1", "-n", "2")
    assert one.output.strip().splitlines()[-1] == "1 paths"


def test_lattice_normal(run):
    res = run("lattice", "normal", "-p", "1", "-q", "1", "-n", "2", "--format", "json")
    rows = json.loads(res.output)
    smooth = [r for r in rows if r["smooth"]]
    assert len(smooth) == 2
    assert sorted(r["parity"] for r in smooth) == ["even", "odd"]
    text = run("lattice", "normal", "-p", "1", "-q", "1", "-n", "2").output
    assert text.strip().splitlines()[-1] == f"{len(rows)} normal, 2 smooth"


def test_formula_cup(run):
    assert run("formula", "cup", "-p", "2", "-q", "2", "-i", "2").output.strip() == "− a b"
    assert run("formula", "cup", "-p", "1", "-q", "1", "-i", "0").output.strip() == "+ d2(a) d0(b)"


def test_formula_bracket(run):
    assert run("formula", "bracket", "-p", "1", "-q", "1", "-n", "1").output.strip() == "+ a b − b a"
    res = run("formula", "bracket", "-p", "3", "-q", "3", "-n", "2", "--format", "json")
    F = Formula.from_json(json.loads(res.output))
    assert F == bracket_formula(3, 3, 2) and len(F) == 8


def test_formula_bad_degree(run):
    assert run("formula", "bracket", "-p", "1", "-q", "1", "-n", "0").exit_code == 2


def test_cohomology(run):
    res = run("instance", "cohomology", "--config", str(fixture_path("heisenberg.json")), "--degree", "1")
    assert res.exit_code == 0
    assert res.output.splitlines()[0] == "dim H^1 = 3"
    res = run(
        "instance", "cohomology", "--config", str(fixture_path("sl2.json")), "--degree", "2", "--format", "json"
    )
    assert json.loads(res.output)["dim"] == 3


def test_cohomology_degree_too_high(run):
    res = run("instance", "cohomology", "--config", str(fixture_path("heisenberg.json")), "--degree", "3")
    assert res.exit_code == 2


def test_instance_bracket(run, tmp_path):
    cfg = _config(tmp_path, truncation=4, max_degree=4, complex="invariant")
    res = run("instance", "bracket", "--config", cfg, "--deg-a", "2", "--deg-b", "3", "--n", "2")
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[-1] == "2 pairs"
    assert all(" exact: " in line for line in lines[:-1])


@pytest.mark.parametrize("suite", ["commutativity", "symmetry", "pac", "schouten"])
def test_suites_pass_on_heisenberg(run, suite):
    res = run("instance", "verify", "--config", str(fixture_path("heisenberg.json")), "--suite", suite)
    assert res.exit_code == 0, res.output
    assert res.output.strip().endswith(f"{suite}: PASS")


def test_nte_suite(run):
    res = run("instance", "verify", "--config", str(fixture_path("heisenberg_f3.json")), "--suite", "nte")
    assert res.exit_code == 0, res.output
    assert "= 2 * (z⊗z^2 + z^2⊗z)" in res.output


def test_nte_fails_in_characteristic_five(run, tmp_path):
    cfg = _config(tmp_path, char=5, truncation=4, complex="invariant")
    res = run("instance", "verify", "--config", cfg, "--suite", "nte")
    assert res.exit_code == 1
    assert res.output.strip().endswith("nte: FAIL")


def test_unavailable_suite_is_usage_error(run):
    res = run("instance", "verify", "--config", str(fixture_path("heisenberg.json")), "--suite", "nte")
    assert res.exit_code == 2


def test_schema_error_names_field(run, tmp_path):
    cfg = _config(tmp_path, char=-1)
    res = run("instance", "cohomology", "--config", cfg, "--degree", "1")
    assert res.exit_code == 2
    assert "char: -1 is less than the minimum of 0" in res.output


def test_jacobi_error_is_usage_error(run, tmp_path):
    cfg = _config(tmp_path, basis=["a", "b", "c"], brackets={"[a,b]": "a", "[a,c]": "b"})
    res = run("instance", "cohomology", "--config", cfg, "--degree", "1")
    assert res.exit_code == 2
    assert "Jacobi" in res.output


def test_missing_config(run, tmp_path):
    res = run("instance", "cohomology", "--config", str(tmp_path / "none.json"), "--degree", "1")
    assert res.exit_code == 2


def test_schouten_sign():
    assert [schouten_sign(p, q) for p, q in ((1, 1), (1, 2), (2, 1), (2, 2))] == [1, -1, 1, 1]
