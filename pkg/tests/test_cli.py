import json
import subprocess
import sys

import pytest

from revnets import fixtures as F
from revnets.cli import main
from revnets.documents import load
from revnets.xform import is_isomorphic


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(capsys, fixtures_dir, tmp_path):
    assert run(capsys, "validate", fixtures_dir / "concurrent_pair.json")[:2] == (0, "valid on\n")
    doc = json.loads((fixtures_dir / "reversible_concurrent_pair.json").read_text())
    doc["kind"] = "on"
    del doc["reversing"], doc["undo"]
    path = tmp_path / "r1_as_on.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "validate", path)
    assert code == 2 and "initial unproduced" in out
    bad = tmp_path / "bad.json"
    bad.write_text("{ nope")
    code, _, err = run(capsys, "validate", bad)
    assert code == 1 and "line 1 column 3" in err
    assert run(capsys, "validate", tmp_path / "missing.json")[0] == 1


def test_convert(capsys, fixtures_dir, tmp_path):
    out_path = tmp_path / "r3.json"
    code, _, _ = run(capsys, "convert", "--from", "on", "--to", "rcn", "--reversible", "e1,e3,e4",
                     fixtures_dir / "conflicting_chains.json", out_path)
    assert code == 0
    assert is_isomorphic(load(out_path), F.reversible_conflicting_chains())
    code, out, _ = run(capsys, "convert", "--from", "rcn", "--to", "rpes",
                       fixtures_dir / "reversible_conflicting_chains.json")
    doc = json.loads(out)
    assert code == 0 and doc["prevention"] == [["e3", "e1"]]
    code, out, err = run(capsys, "convert", "--from", "rpes", "--to", "rcn",
                         fixtures_dir / "non_causal_chain_rpes.json")
    assert code == 0 and "input is not causal" in err and json.loads(out)["kind"] == "rcn"
    code, out, _ = run(capsys, "convert", "--from", "pes", "--to", "on",
                       fixtures_dir / "conflicting_chains_pes.json")
    assert code == 0 and json.loads(out)["kind"] == "on"
    assert run(capsys, "convert", "--from", "pes", "--to", "rcn",
               fixtures_dir / "conflicting_chains_pes.json")[0] == 1
    assert run(capsys, "convert", "--from", "on", "--to", "rcn",
               fixtures_dir / "conflicting_chains.json")[0] == 1
    assert run(capsys, "convert", "--from", "on", "--to", "rcn", "--reversible", "zz",
               fixtures_dir / "conflicting_chains.json")[0] == 2


def test_listings(capsys, fixtures_dir):
    code, out, _ = run(capsys, "configs", fixtures_dir / "abc_rpes.json")
    assert code == 0 and out.split() == ["{}", "{a}", "{c}", "{a,b}", "{a,c}", "{a,b,c}"]
    code, out, _ = run(capsys, "reach", fixtures_dir / "reversible_concurrent_pair.json")
    assert out.split() == ["{b1,b3}", "{b1,b4}", "{b2,b3}", "{b2,b4}"]
    code, out, _ = run(capsys, "states", fixtures_dir / "sequence_pair.json")
    assert out.split() == ["{}", "{e1}", "{e1,e2}"]
    code, out, _ = run(capsys, "states", "--depth", "2", fixtures_dir / "reversible_conflict_pair.json")
    assert "{e1,ē1}" in out.split()


def test_simulate(capsys, fixtures_dir):
    code, out, _ = run(capsys, "simulate", "--trace", "a ; b ; c,~b ; b", fixtures_dir / "abc_rpes.json")
    assert code == 0
    assert out.splitlines() == ["start: {}", "step 1 a: {a}", "step 2 b: {a,b}",
                                "step 3 c,~b: {a,c}", "step 4 b: {a,b,c}", "final: {a,b,c}"]
    code, out, _ = run(capsys, "simulate", "--trace", "e1 ; ~e1 ; e2",
                       fixtures_dir / "reversible_concurrent_pair.json")
    assert code == 0 and out.splitlines()[-1] == "final: {b1,b4}"
    code, out, _ = run(capsys, "simulate", "--trace", "a ; b ; ~a", fixtures_dir / "abc_rpes.json")
    assert code == 2 and "prevention: b ▷ ~a but b ∈ X ∪ A" in out
    code, out, _ = run(capsys, "simulate", "--trace", "e2", fixtures_dir / "sequence_pair.json")
    assert code == 2 and "not enabled: place b2 is not marked" in out
    assert run(capsys, "simulate", "--trace", "zz", fixtures_dir / "abc_rpes.json")[0] == 2
    assert run(capsys, "simulate", "--trace", "a ; ; b", fixtures_dir / "abc_rpes.json")[0] == 1


def test_check(capsys, fixtures_dir, tmp_path):
    code, out, _ = run(capsys, "check", fixtures_dir / "reversible_conflict_pair.json")
    assert code == 0
    assert {c["verdict"] for c in json.loads(out)["checks"]} == {"pass"}
    path = fixtures_dir / "non_causal_chain_rpes.json"
    code, out, _ = run(capsys, "check", "--checks", "rpes-rcn-configurations", path)
    report = json.loads(out)["checks"][0]
    assert code == 2 and report["known"] and report["counterexample"]["only_rpes"] == [["e2"]]
    code, _, _ = run(capsys, "check", "--checks", "rpes-rcn-configurations", "--allow-known", path)
    assert code == 0
    code, out, _ = run(capsys, "check", "-o", tmp_path / "r.json", path)
    assert "fail    rpes-rcn-configurations (known)" in out
    assert run(capsys, "check", "--checks", "nope", path)[0] == 1


def test_dot_and_gen(capsys, fixtures_dir, tmp_path):
    code, out, _ = run(capsys, "dot", fixtures_dir / "reversible_conflict_pair.json")
    assert code == 0 and out.startswith("digraph net {")
    assert run(capsys, "dot", fixtures_dir / "abc_rpes.json")[0] == 1
    code, out, _ = run(capsys, "gen", "causal_rpes", "--size", "3", "--seed", "5")
    assert code == 0 and json.loads(out)["kind"] == "rpes"
    assert run(capsys, "gen", "rpes", "--size", "99")[0] == 1


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1


def test_console_entry_point(fixtures_dir):
    proc = subprocess.run([sys.executable, "-m", "revnets.cli", "configs",
                           str(fixtures_dir / "conflict_pair.json")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.split() == ["{}", "{e1}", "{e2}"]
