import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinberg.cli import cache_key, dumps, jsonable, main, run_command
from fractions import Fraction


@pytest.fixture(autouse=True)
def cache(tmp_path, monkeypatch):
    monkeypatch.setenv("STB_CACHE_DIR", str(tmp_path / "cache"))
    return tmp_path / "cache"



def test_building_example(tmp_path):
    out = tmp_path / "r.json"
    report, code = run_command(["building", "--n", "2", "--q", "2", "--homology", "--cm-check",
                                "--json", str(out), "--quiet"])
    assert code == 0 and report["passed"]
    data = json.loads(out.read_text())
    assert data["results"]["homology"]["betti"]["1"] == 16
    assert data["results"]["cm_certificate"]["passed"]
    assert data["certification_level"] == "homological" and data["schema_version"] == "1.0"


def test_reduce_example():
    report, code = run_command(["reduce", "--from", "inf", "--to", "3/7", "--quiet"])
    assert code == 0 and len(report["results"]["symbols"]) == 3


def test_pipeline_example():
    report, code = run_command(["pipeline", "verify-prop51", "--n", "1", "--matrix", "1,0;0,1",
                                "--bound", "2", "--quiet"])
    assert code == 0 and report["passed"]


@pytest.mark.parametrize("argv,code", [
    (["frobnicate"], 2),
    (["building", "--n", "2", "--q", "2", "--bogus"], 2),
    (["building", "--n", "2", "--q", "3", "--budget", "10"], 3),
    (["complex", "--kind", "B", "--n", "2", "--bound", "1"], 2),
    (["pipeline", "verify-prop51", "--n", "1", "--matrix", "1,x;0,1"], 4),
    (["pipeline", "verify-prop51", "--n", "1", "--matrix", "1,1;1,1"], 4),
    (["pipeline", "verify-prop51", "--n", "1", "--matrix", "1,5;0,1", "--bound", "2"], 5),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv + ["--quiet"]) == code
    if code != 2:
        assert "stb:" in capsys.readouterr().err


def test_other_commands():
    for argv in (["restricted", "--n", "1", "--q", "3"],
                 ["complex", "--kind", "IA", "--n", "1", "--bound", "2", "--homology", "--sigma"],
                 ["span", "--n", "1", "--q", "3", "--equivariance", "5"],
                 ["cm-check", "--poset", "beta-boundary", "--n", "3"],
                 ["pipeline", "fundamental", "--n", "3"],
                 ["pipeline", "rank-one", "--bound", "3"],
                 ["pipeline", "two-routes", "--samples", "2", "--bound", "2"]):
        report, code = run_command(argv + ["--quiet"])
        assert code == 0, argv


def test_truncation_certification():
    report, code = run_command(["complex", "--kind", "B", "--n", "2", "--bound", "1", "--V", "1,0,0,0",
                                 "--homology", "--quiet"])
    assert report["certification_level"] == "experimental-truncation"


def test_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["complex", "--kind", "IA", "--n", "1", "--bound", "3", "--homology", "--no-cache", "--quiet"]
    run_command(argv + ["--json", str(a)])
    run_command(argv + ["--json", str(b)])
    assert a.read_bytes() == b.read_bytes()


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 4), st.sampled_from([2, 3, 5]))
def test_cache_transparency(n, q):
    argv = ["cm-check", "--poset", "simplex-boundary", "--n", str(n), "--quiet"]
    cold, _ = run_command(argv + ["--no-cache"])
    run_command(argv)
    hot, _ = run_command(argv)
    assert dumps(cold) == dumps(hot)
    argv = ["span", "--n", "1", "--q", str(q), "--quiet"]
    assert dumps(run_command(argv + ["--no-cache"])[0]) == dumps(run_command(argv)[0]) == dumps(run_command(argv)[0])


def test_cache_written(cache):
    run_command(["reduce", "--from", "1/2", "--to", "5", "--quiet"])
    assert len(list(cache.glob("*.json"))) == 1
    assert cache_key("reduce", {"a": 1}) != cache_key("reduce", {"a": 2})


def test_timing_off_by_default():
    r, _ = run_command(["reduce", "--from", "0", "--to", "1", "--quiet"])
    assert r["timing_ms"] is None
    r, _ = run_command(["reduce", "--from", "0", "--to", "1", "--quiet", "--timing"])
    assert r["timing_ms"] >= 0


def test_jsonable_rationals():
    assert jsonable({"x": Fraction(3, 7), 1: [Fraction(2)]}) == {"x": "3/7", "1": ["2"]}
