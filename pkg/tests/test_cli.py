from __future__ import annotations

import json
import subprocess
import sys

import pytest

from bisetcalc import characters
from bisetcalc.catalog import GroupSpec, parse_group_spec
from bisetcalc.cli import main, run
from bisetcalc.errors import GroupSpecError, GroupTooLarge, InvalidPermutation
from bisetcalc.groups import LIMITS


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("BISETCALC_CACHE", raising=False)
    saved_cache, saved_cap = characters.CACHE, LIMITS.lattice
    yield tmp_path
    characters.CACHE, LIMITS.lattice = saved_cache, saved_cap


def ok(argv):
    status, out = run(argv)
    assert status == 0, out
    return out


def test_parse_group_spec(tmp_path):
    spec = parse_group_spec("C6")
    assert isinstance(spec, GroupSpec) and spec.kind == "catalog" and spec.resolved.order == 6
    assert parse_group_spec("E3^2").resolved.order == 9
    path = tmp_path / "v4.json"
    path.write_text(json.dumps({"degree": 4, "generators": [[[1, 2], [3, 4]], [[1, 2]]]}))
    spec = parse_group_spec(str(path))
    assert spec.kind == "file" and spec.resolved.order == 4


def test_parse_group_spec_errors(tmp_path):
    with pytest.raises(GroupSpecError, match="s4"):
        parse_group_spec("s4")
    with pytest.raises(GroupSpecError, match="not found"):
        parse_group_spec(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{ nope")
    with pytest.raises(GroupSpecError, match="malformed"):
        parse_group_spec(str(bad))
    bad.write_text(json.dumps({"generators": []}))
    with pytest.raises(GroupSpecError, match="degree"):
        parse_group_spec(str(bad))
    bad.write_text(json.dumps({"degree": 3, "generators": [[1, 1, 2]]}))
    with pytest.raises(InvalidPermutation):
        parse_group_spec(str(bad))
    bad.write_text(json.dumps({"degree": 8, "generators": [[[1, 2]], [[1, 2, 3, 4, 5, 6, 7, 8]]]}))
    with pytest.raises(GroupTooLarge):
        parse_group_spec(str(bad))


def test_e2_example():
    out = ok(["e2", "--p", "2"])
    assert "detC = -2" in out and "match" in out
    doc = json.loads(ok(["e2", "--p", "3", "--json"]))
    assert doc["detC"] == "-48" and doc["detC_matches_formula"] is True
    assert doc["kernel_dim"] == 4 and doc["invariant_dim"] == 1 and doc["n_Cp1"] == 1
    assert len(doc["C"]) == 8 and all(isinstance(x, str) for row in doc["C"] for x in row)


def test_induce_example():
    out = ok(["induce", "C5", "--H", "C5", "--V", "0"])
    assert "P_{C5,triv} + P_{1,triv}" in out and "[fully determined]" in out
    doc = json.loads(ok(["induce", "C5", "--H", "C5", "--V", "0", "--json"]))
    assert doc["fully_determined"] is True
    assert [t["P"] for t in doc["terms"]] == ["{C5,triv}", "{1,triv}"]
    out = ok(["induce", "E2^2", "--H", "E2^2", "--V", "0"])
    assert out.endswith("= P_{E2^2,triv} + P_{C2,triv}  [fully determined]")
    out = ok(["induce", "E3^2", "--H", "E3^2", "--V", "0"])
    assert "[bounded" in out and "P_{E3^2,triv} + P_{C3,triv}" in out


def test_usage_errors():
    assert run(["nonsense"])[0] == 2
    assert run([])[0] == 2
    assert run(["sq"])[0] == 2
    assert run(["sq", "C0"])[0] == 2
    assert run(["sq", "Z7"])[0] == 2
    assert run(["induce", "C5", "--H", "C5", "--V", "9"])[0] == 2
    assert run(["xset", "S3", "--K", "Q8", "--R", "S3"])[0] == 2
    assert run(["e2", "--p", "x"])[0] == 2


def test_computation_fault_exit_code():
    status, out = run(["e2", "--p", "4"])
    assert status == 1 and "error" in out
    status, out = run(["sq", "S5", "--max-order", "50"])
    assert status == 1 and "cap" in out


def test_sq_output():
    out = ok(["sq", "S3"])
    assert "in 4 classes" in out
    doc = json.loads(ok(["sq", "S3", "--json"]))
    assert [c["name"] for c in doc["classes"]] == ["1", "C2", "C3", "S3"]
    assert [c["order"] for c in doc["classes"]] == [1, 2, 3, 6]
    assert set(doc["classes"][0]) == {"order", "name", "member_count"}


def test_chartable_output():
    doc = json.loads(ok(["chartable", "S3", "--json"]))
    assert doc["conductor"] == 6 and len(doc["characters"]) == 3
    assert [c["size"] for c in doc["classes"]] == [1, 3, 2]
    out = ok(["chartable", "C3"])
    assert "chi0: 1  1  1" in out and "]_3" in out
    assert "." not in out.split("\n", 1)[1]  # exact values only


def test_xset_output():
    doc = json.loads(ok(["xset", "E3^2", "--K", "C3", "--R", "E3^2", "--json"]))
    assert doc["size"] == 8 and doc["out_R_order"] == 48
    out = ok(["xset", "S4", "--K", "1", "--R", "S4"])
    assert out.startswith("|X(1,S4)| = 1")


def test_ngmatrix_output():
    doc = json.loads(ok(["ngmatrix", "C3", "--json"]))
    assert doc["pairs"] == ["(1,triv)", "(C3,triv)", "(C3,chi1)"]
    vals = [[e["value"] for e in row] for row in doc["entries"]]
    assert vals == [[1, 0, 0], [1, 1, 0], [0, 0, 1]]
    assert all(e["status"] in ("exact", "bound") for row in doc["entries"] for e in row)
    out = ok(["ngmatrix", "E2^2"])
    assert "B" in out and "note (E2^2,triv)" in out


def test_krq_output():
    assert ok(["krq", "S3"]) == "kR_Q = S_{1,1} + S_{C2,1} + S_{C3,1}"
    doc = json.loads(ok(["krq", "C4", "--json"]))
    assert [s["name"] for s in doc["summands"]] == ["1", "C2", "C4"]


def test_determinism_and_cache(isolated):
    first = run(["chartable", "A4"])
    second = run(["chartable", "A4"])
    assert first == second
    files = list((isolated / ".bisetcalc-cache").glob("*.json"))
    assert files
    custom = isolated / "elsewhere"
    assert run(["chartable", "A4", "--cache-dir", str(custom)]) == first
    assert list(custom.glob("*.json"))


def test_cache_env_var(isolated, monkeypatch):
    target = isolated / "from-env"
    monkeypatch.setenv("BISETCALC_CACHE", str(target))
    ok(["chartable", "Q8"])
    assert list(target.glob("*.json"))


def test_file_group_spec(isolated):
    path = isolated / "s3.json"
    path.write_text(json.dumps({"degree": 3, "generators": [[[1, 2]], [[1, 2, 3]]], "name": "mine"}))
    doc = json.loads(ok(["sq", str(path), "--json"]))
    assert [c["name"] for c in doc["classes"]] == ["1", "C2", "C3", "S3"]


def test_main_streams(capsys):
    assert main(["e2", "--p", "2"]) == 0
    assert "detC = -2" in capsys.readouterr().out
    assert main(["nonsense"]) == 2
    captured = capsys.readouterr()
    assert captured.out == "" and "usage" in captured.err


def test_module_entry_point(isolated):
    proc = subprocess.run([sys.executable, "-m", "bisetcalc", "e2", "--p", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "detC = -2" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "bisetcalc", "nonsense"], capture_output=True, text=True)
    assert proc.returncode == 2 and "usage" in proc.stderr
