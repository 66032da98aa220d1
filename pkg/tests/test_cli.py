import json

import pytest

from twisted_hodge import forms as F
from twisted_hodge.catalog import builtin_model
from twisted_hodge.cli import main, parse_degrees
from twisted_hodge.cohomology import membership_facts
from twisted_hodge.errors import ParseError
from twisted_hodge.twisted import twisted_complex

NAKAMURA = ["--model", "nakamura", "--theta1", "1/2*mu1"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_json(capsys):
    code, out, _ = run(capsys, "compute", *NAKAMURA)
    assert code == 0
    doc = json.loads(out)
    assert doc["dims"]["delbar"] == [0] * 7
    assert doc["verdicts"]["lemma_failing_degrees"][0] == 2
    assert doc["witness"]["primitive"] == "mubar3"
    assert doc["twist"]["phi"] == "1/2*mu1 + 1/2*mubar1"


def test_compute_is_deterministic(capsys):
    _, first, _ = run(capsys, "compute", *NAKAMURA, "--metric", "diag:1,2,3")
    _, second, _ = run(capsys, "compute", *NAKAMURA, "--metric", "diag:1,2,3")
    assert first == second
    doc = json.loads(first)
    assert doc["harmonic"] == doc["dims"]


def test_compute_table_and_degrees(capsys):
    code, out, _ = run(capsys, "compute", *NAKAMURA, "--degrees", "1-2", "--format", "table")
    assert code == 0 and "BC" in out
    code, out, _ = run(capsys, "compute", *NAKAMURA, "--degrees", "2")
    assert json.loads(out)["dims"]["A"] == [4]


def test_parse_degrees():
    assert parse_degrees("0,2", 6) == [0, 2]
    assert parse_degrees("1-3", 6) == [1, 2, 3]
    assert parse_degrees(None, 6) is None
    for bad in ("7", "x", "3-9", ""):
        with pytest.raises(ParseError):
            parse_degrees(bad, 6)


def test_witness_reparses_and_reverifies(capsys):
    code, out, _ = run(capsys, "witness", *NAKAMURA)
    assert code == 0
    w = json.loads(out)["witness"]
    assert w["form"] == "1/2*mu1^mubar3 + 1/2*mubar1^mubar3"
    tc = twisted_complex(builtin_model("nakamura").spec, "1/2*mu1", "0")
    vec = tc.basis.to_vector(F.parse_form(w["form"], 3), w["degree"])
    facts = membership_facts(tc, w["degree"], vec, w["primitive_operator"])
    assert all(facts.values()) and facts == w["facts"]


def test_witness_when_lemma_holds(capsys):
    code, _, err = run(capsys, "witness", "--model", "torus2")
    assert code == 2
    assert json.loads(err)["error"] == "NoWitness"


@pytest.mark.parametrize("suite", ["operators", "hodge", "duality", "frolicher"])
def test_verify_suites(capsys, suite):
    code, out, _ = run(capsys, "verify", *NAKAMURA, "--suite", suite)
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    assert all(doc["suites"][suite].values())


def test_verify_all_on_kahler_torus(capsys):
    code, out, _ = run(capsys, "verify", "--model", "torus2", "--theta1", "mu1", "--metric", '[["2","i"],["-i","1"]]', "--format", "table")
    assert code == 0
    assert "[kahler]" in out and "FAIL" not in out


def test_verify_kahler_on_non_kahler_metric(capsys):
    code, _, err = run(capsys, "verify", "--model", "iwasawa", "--suite", "kahler")
    assert code == 2 and json.loads(err)["error"] == "NotKahler"


@pytest.mark.parametrize(
    "argv, error",
    [
        (["compute", "--model", "nowhere"], "UnknownModel"),
        (["compute", "--model", "nakamura", "--theta1", "mu2"], "NotBottChernClosed"),
        (["compute", "--model", "torus1", "--theta1", "mu1^mubar1"], "ParseError"),
        (["compute", "--model", "torus2", "--metric", "diag:1,-1"], "BadMetric"),
        (["compute", "--model", "torus1", "--theta1", "1/0*mu1"], "DivisionByZero"),
        (["compute", "--file", "/nonexistent/model.json"], "ParseError"),
    ],
)
def test_input_errors(capsys, argv, error):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    doc = json.loads(err)
    assert doc["error"] == error and doc["exit_code"] == 2


def test_size_guard_from_file(capsys, tmp_path):
    path = tmp_path / "big.json"
    path.write_text(json.dumps({"name": "big", "n": 6, "d": []}))
    code, _, err = run(capsys, "compute", "--file", str(path))
    assert code == 2 and json.loads(err)["error"] == "SizeGuard"


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0 and "nakamura" in out
    code, out, _ = run(capsys, "catalog", "show", "iwasawa", "--format", "json")
    doc = json.loads(out)
    assert doc["normative"] is False and doc["abelian"] is False
    code, _, _ = run(capsys, "catalog", "show")
    assert code == 2


def test_export_then_compute_from_file(capsys, tmp_path):
    path = tmp_path / "nakamura.json"
    assert run(capsys, "export", "--model", "nakamura", "-o", str(path))[0] == 0
    _, from_file, _ = run(capsys, "compute", "--file", str(path), "--theta1", "1/2*mu1")
    _, builtin, _ = run(capsys, "compute", *NAKAMURA)
    assert json.loads(from_file) == json.loads(builtin)


def test_file_with_non_integrable_structure(capsys, tmp_path):
    path = tmp_path / "bad.json"
    doc = {"n": 2, "d": [{"target": 1, "terms": [{"coeff": "1", "kind": "anti", "i": 1, "j": 2}]}]}
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "compute", "--file", str(path))
    assert code == 2 and json.loads(err)["error"] == "NotIntegrable"
