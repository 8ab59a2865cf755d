import json
import shlex
import subprocess
import sys

import pytest

from qkan import fixtures
from qkan.cli import main

LUK = {"kind": "chain-tnorm", "size": 3, "tnorm": "lukasiewicz"}
GODEL = {"kind": "chain-tnorm", "size": 3, "tnorm": "godel"}


def write(tmp_path, doc, name="ws.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return str(p)


@pytest.fixture
def half(tmp_path):
    doc = {"quantale": LUK,
           "categories": {"S": {"objects": [{"id": "s", "type": "*"}]}},
           "distributors": {"phi": {"from": "S", "to": "S", "matrix": [["s", "s", "1/2"]]}}}
    return write(tmp_path, doc)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_check_girard(capsys, half):
    code, v = run_json(capsys, "check", "girard", "-i", half)
    assert code == 0 and v["result"] == "holds" and v["witness"] == {"family": {"*": "0"}}


def test_check_regular_fails_with_entry(capsys, half):
    code, v = run_json(capsys, "check", "regular", "phi", "-i", half)
    assert code == 1 and v["result"] == "fails"
    assert v["witness"] == {"cell": ["s", "s"], "phi": "1/2", "phi_bar_phi": "0"}


def test_kphi_members(capsys, half):
    code, v = run_json(capsys, "kphi", "phi", "-i", half)
    assert code == 0
    assert sorted(m["values"]["s"] for m in v["witness"]["members"]) == ["1", "1/2"]
    code, out, _ = run(capsys, "kphi", "phi", "-i", half, "--emit-dot")
    assert "members:" in out and "digraph order" in out


def test_check_ccd_on_kphi(capsys, half):
    code, v = run_json(capsys, "check", "ccd", "kphi:phi", "-i", half)
    assert code == 1 and v["witness"] == {"reason": "sup has no left adjoint"}
    code, v = run_json(capsys, "check", "complete", "S", "-i", half)
    assert code == 0


def test_text_output(capsys, half):
    code, out, _ = run(capsys, "check", "regular", "phi", "-i", half)
    assert code == 1 and out.startswith("regular phi: fails")


@pytest.mark.parametrize("argv", [
    ["check", "ccd", "nosuch"],
    ["check", "regular", "nosuch"],
    ["check", "regular"],
    ["verify", "thm0.0"],
])
def test_invalid_names_exit_2(capsys, half, argv):
    code, out, err = run(capsys, *argv, "-i", half)
    assert code == 2 and err.startswith("qkan: invalid:")


def test_invalid_documents_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert run(capsys, "check", "girard", "-i", str(bad))[0] == 2
    refl = write(tmp_path, {"quantale": LUK, "categories": {"A": {"objects": ["x"], "hom": [["x", "x", "0"]]}}}, "r.json")
    code, _, err = run(capsys, "check", "ccd", "A", "-i", refl)
    assert code == 2 and "reflexivity" in err
    assert run(capsys, "check", "girard", "-i", str(tmp_path / "missing.json"))[0] == 2


def test_budget_exit_3(capsys, half):
    code, v = run_json(capsys, "verify", "thm4.6", "-i", half, "--budget", "5")
    assert code == 3 and v["result"] == "budget-exceeded" and v["details"]["partial"]
    code, v = run_json(capsys, "kphi", "phi", "-i", half, "--budget", "1")
    assert code == 3


def test_verify_reports_counts(capsys, half):
    code, v = run_json(capsys, "verify", "thm7.7", "-i", half)
    assert code == 0 and v["counts"]["instances"] == 107 + 1  # the sweep plus the declared φ
    assert v["details"]["aliases"] == ["thm7.7"]
    assert set(v) == {"check", "result", "witness", "timing_s", "counts", "details"}


def test_qkan_budget_env(tmp_path, half):
    env = {"QKAN_BUDGET": "1", "PATH": "/usr/bin:/bin"}
    r = subprocess.run([sys.executable, "-m", "qkan.cli", "kphi", "phi", "-i", half], capture_output=True, env=env)
    assert r.returncode == 3


def recheck(capsys, witness, tmp_path):
    path = write(tmp_path, witness["workspace"], "witness.json")
    assert witness["recheck"]
    for item in witness["recheck"]:
        argv = shlex.split(item["command"]) + ["-i", path]
        code, out, _ = run(capsys, *argv)
        assert code == {"holds": 0, "fails": 1}[item["expect"]], (item, out)


@pytest.mark.parametrize("implication", [3, 4, 5])
def test_mine_witnesses_recheck(capsys, tmp_path, implication):
    ws = write(tmp_path, {"quantale": GODEL})
    code, v = run_json(capsys, "mine", "--implication", str(implication), "-i", ws)
    assert code == 1 and v["result"] == "fails"
    recheck(capsys, v["witness"], tmp_path)


def test_criterion_witnesses_recheck(capsys, tmp_path):
    ws = write(tmp_path, {"quantale": GODEL})
    code, v = run_json(capsys, "verify", "thm8.2", "-i", ws)
    assert code == 0 and v["details"]["pattern"] == "all fail"
    for cond in ("iii", "iv"):
        recheck(capsys, v["witness"][cond], tmp_path)


def test_mine_holds_on_lukasiewicz(capsys, half):
    code, v = run_json(capsys, "mine", "--implication", "3", "-i", half)
    assert code == 0 and "no universal claim" in v["details"]["scope"]


def test_console_script(half):
    r = subprocess.run(["qkan", "check", "girard", "-i", half, "--format", "json"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["result"] == "holds"


def test_opposite_and_envelope_bases(capsys, tmp_path):
    doc = {"quantaloid": fixtures.SPECS["girard-2"],
           "categories": {"S": {"objects": [{"id": "s", "type": "*"}]}}}
    p = write(tmp_path, doc, "g.json")
    assert run(capsys, "check", "girard", "-i", p)[0] == 0
    assert run(capsys, "check", "complete", "S", "-i", p)[0] == 1
