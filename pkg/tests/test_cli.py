from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from policysim.cli import main, resolve_key


@pytest.fixture
def paths(fixtures_dir):
    return str(fixtures_dir / "P.xml"), str(fixtures_dir / "Q.xml")


def test_resolve_key():
    names = ("subject-id", "action-id")
    assert resolve_key("subject", names) == "subject-id"
    assert resolve_key("urn:oasis:names:tc:xacml:1.0:action:action-id", names) == "action-id"
    assert resolve_key("nope", names) is None


def test_compare_text(paths, capsys):
    assert main(["compare", *paths, "--witness"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("relation: Converge")
    assert "witness permit:in1not2: none" in out


def test_compare_with_itself(paths, capsys):
    assert main(["compare", paths[0], paths[0]]) == 0
    assert capsys.readouterr().out.startswith("relation: Converge")


def test_compare_json_trace(paths, capsys):
    assert main(["compare", *paths, "--trace", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["relation"] == "Converge"
    assert data["traces"]["permit ≈"][-1] == "-> 1 ; by T9"


def test_eval(paths, tmp_path, capsys):
    req = tmp_path / "req.json"
    req.write_text(json.dumps({"attributes": {"resource-id": "secret.txt", "action": "write",
                                              "subject-id": "Alice"}}))
    assert main(["eval", paths[0], "--request", str(req)]) == 0
    assert capsys.readouterr().out.strip() == "Deny"
    req.write_text(json.dumps({"attributes": {"resource-id": "secret.txt", "action-id": "?"}}))
    assert main(["eval", paths[0], "--request", str(req)]) == 0
    assert capsys.readouterr().out.strip().startswith("Indeterminate")
    assert main(["eval", paths[0], "--request", str(req), "--strict"]) == 3


def test_normalize(paths, capsys):
    assert main(["normalize", paths[0], "--trace"]) == 0
    out = capsys.readouterr().out
    assert "sepl: ((⊥,(" in out
    assert "permit normal form:" in out and "deny normal form:" in out


def test_generate_and_bench(tmp_path, capsys):
    assert main(["generate", "--rules", "3", "--count", "2", "--seed", "4", "--out", str(tmp_path)]) == 0
    files = capsys.readouterr().out.split()
    assert len(files) == 2
    assert main(["compare", *files]) == 0
    capsys.readouterr()
    assert main(["bench", "--rules", "2,4", "--reps", "1", "--out", "-"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [r["ruleCount"] for r in rows] == ["2", "4"]
    out = tmp_path / "b.csv"
    assert main(["bench", "--rules", "2", "--reps", "1", "--out", str(out)]) == 0
    assert out.exists() and "rules=2" in capsys.readouterr().out


def test_exit_codes(paths, tmp_path, capsys):
    bad = tmp_path / "bad.xml"
    bad.write_text("<Match/>")
    assert main(["compare", paths[0], str(bad)]) == 2
    assert "GrammarViolation" in capsys.readouterr().err
    assert main(["compare", paths[0], str(tmp_path / "missing.xml")]) == 5
    assert main(["generate", "--rules", "0", "--out", str(tmp_path)]) == 2
    broken = tmp_path / "r.json"
    broken.write_text("{")
    assert main(["eval", paths[0], "--request", str(broken)]) == 5


def test_module_entry_point(paths):
    proc = subprocess.run([sys.executable, "-m", "policysim", "compare", *paths],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "Converge" in proc.stdout
