import json
import subprocess
import sys

import pytest

from scilogic.algebra import necessitation_counterexample, structure_to_json
from scilogic.cli import main
from scilogic.proof import derivation_to_jsonl, fixture_derivations
from scilogic.syntax import to_text


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


@pytest.fixture
def model_file(tmp_path):
    p = tmp_path / "model.json"
    p.write_text(json.dumps(structure_to_json(necessitation_counterexample())))
    return str(p)


def test_parse_expands_defined_symbols(capsys):
    assert run(capsys, "parse", "x0 <-> x1") == (0, "((x0 -> x1) & (x1 -> x0))", "")
    assert run(capsys, "parse", "--lang", "modal", "x0 == x1")[1] == "([] (x0 -> x1) & [] (x1 -> x0))"


def test_translate_directions(capsys):
    assert run(capsys, "translate", "--dir", "id", "[](x0)")[1] == "(x0 == T)"
    assert run(capsys, "translate", "--dir", "box", "x0 == x1")[1] == "([] (x0 -> x1) & [] (x1 -> x0))"
    assert run(capsys, "translate", "--dir", "star", "x0 == x1")[1] == "((x0 -> x1) & (x1 -> x0))"


def test_translate_expands_before_translating(capsys):
    # modal input "x0 == x1" is strict equivalence
    code, out, _ = run(capsys, "translate", "--dir", "id", "x0 == x1")
    assert code == 0 and out == "(((x0 -> x1) == T) & ((x1 -> x0) == T))"


def test_eval(capsys, model_file):
    code, out, _ = run(capsys, "eval", model_file, "[]x0", "--assign", "x0={0}")
    assert code == 0 and json.loads(out) == {"formula": "(x0 == T)", "value": "{1}", "true": False}


def test_eval_unassigned_variable(capsys, model_file):
    code, _, err = run(capsys, "eval", model_file, "x1")
    assert code == 2 and "x1" in err


def test_valid(capsys, model_file):
    code, out, _ = run(capsys, "valid", model_file, "x0 == x0")
    assert code == 0 and json.loads(out)["valid"]
    code, out, _ = run(capsys, "valid", model_file, "[]([]x0 -> x0)")
    assert code == 1 and json.loads(out)["countervaluation"] == {"x0": "{}"}


def test_countermodel_found_and_not_found(capsys):
    code, out, _ = run(capsys, "countermodel", "--class", "sci", "--max-size", "4", "[]([]x0 -> x0)")
    res = json.loads(out)
    assert code == 1 and res["result"] == "countermodel of size 4" and len(res["model"]["true_set"]) == 2
    code, out, _ = run(capsys, "countermodel", "--class", "s1sp", "--max-size", "4", "[]([]x0 -> x0)")
    assert code == 0 and json.loads(out)["result"] == "no countermodel up to size 4"


def test_countermodel_budget(capsys):
    code, out, _ = run(capsys, "countermodel", "--class", "sci", "--budget", "3", "x0 == x0")
    assert code == 0 and json.loads(out)["result"].startswith("search budget exhausted")


def test_check_proof(capsys, tmp_path):
    d = fixture_derivations()["sci_id2_mp"]
    p = tmp_path / "proof.jsonl"
    p.write_text(derivation_to_jsonl(d))
    hyps = [a for h in d.hyps for a in ("--hyp", to_text(h))]
    code, out, _ = run(capsys, "check-proof", str(p), "--system", "SCI", *hyps)
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(capsys, "check-proof", str(p), "--system", "SCI")
    assert code == 1 and json.loads(out)["step"] == 1


def test_check_proof_bad_file(capsys, tmp_path):
    p = tmp_path / "bad.jsonl"
    p.write_text("{oops\n")
    code, _, err = run(capsys, "check-proof", str(p), "--system", "SCI")
    assert code == 2 and "line 1" in err


def test_classify(capsys, model_file):
    code, out, _ = run(capsys, "classify", model_file)
    assert code == 0 and json.loads(out) == {"classes": ["prealgebra", "sci"]}


def test_classify_bad_model(capsys, tmp_path):
    p = tmp_path / "m.json"
    p.write_text('{"elements": []}')
    code, _, err = run(capsys, "classify", str(p))
    assert code == 2 and "elements" in err


def test_canonical_model_checks(capsys):
    assert run(capsys, "intensional", "check", "x0 == x0")[0] == 0
    assert run(capsys, "intensional", "check", "~~x0 == x0")[0] == 1
    assert run(capsys, "extensional", "check", "~~x0 == x0")[0] == 0
    assert run(capsys, "extensional", "check", "x0 == x1")[0] == 1


def test_census(capsys):
    code, out, _ = run(capsys, "census", "--sizes", "2", "4", "--classes", "s5", "interior")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and [r["count"] for r in rows] == [1, 1, 1, 4]


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "translate", "x0")[0] == 2
    assert run(capsys, "parse")[0] == 2
    assert run(capsys, "parse", "x0 &&")[0] == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "scilogic", "translate", "--dir", "id", "[](x0)"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "(x0 == T)"
