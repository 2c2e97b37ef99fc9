import io as stdio
import json
import os

import pytest

from obstruct import cli, fixtures
from obstruct.io import ManifestError, build_problem, content_hash, read_json, strip_timestamp
from oracles import com_table


def run(argv):
    out = stdio.StringIO()
    code = cli.run(argv, stdout=out)
    text = out.getvalue()
    return code, (json.loads(text) if text else None), text


def write(tmp_path, doc, name="m.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


@pytest.mark.parametrize("command,fixture,code,verdict", [
    ("realize", "com-strict", 0, "REALIZED"),
    ("realize", "massey-gf2", 2, "OBSTRUCTED"),
    ("homotopy", "homotopy-equal", 0, "HOMOTOPIC"),
    ("homotopy", "homotopy-gf2", 2, "OBSTRUCTED"),
    ("validate", "graded-com", 0, "VALID"),
    ("validate", "massey-q", 1, "INVALID"),
])
def test_exit_codes(command, fixture, code, verdict):
    got, rep, _ = run([command, "--fixture", fixture])
    assert got == code
    assert rep["verdict"] == verdict


def test_realize_obstruction_report():
    _, rep, _ = run(["realize", "--fixture", "massey-gf2"])
    ob = rep["obstruction"]
    assert ob["grade"] == 1
    assert ob["verified"] is True
    assert ob["h1_block"] == {"kernel": 2, "image": 1, "quotient": 1}
    assert ob["cocycle"] and ob["witness"]
    assert rep["stages"][0]["cocycle_checked"] is True


def test_homotopy_report_components():
    code, rep, _ = run(["homotopy", "--fixture", "homotopy-coboundary"])
    assert code == 0
    assert rep["components"]
    assert all(s["cocycle_checked"] for s in rep["stages"])


def test_missing_provider_capability(tmp_path):
    doc = fixtures.load("homotopy-coboundary")
    doc["providers"] = {"rho": {"max_weight": 0, "values": []}}
    code, rep, _ = run(["homotopy", "--manifest", write(tmp_path, doc)])
    assert code == 3
    assert rep["verdict"] == "INSUFFICIENT_PROVIDER"
    assert rep["missing_capability"] == "diagonal on bar weight 1"


def test_table_sigma_provider_is_used(tmp_path):
    doc = fixtures.load("homotopy-coboundary")
    doc["providers"] = {"sigma": {"max_degree": 1, "values": [[[[1, 2], [2, 1]], ["01#", "01#"], {"01#": 1}]]}}
    code, rep, _ = run(["homotopy", "--manifest", write(tmp_path, doc)])
    assert code == 0


def test_cutoff_flags_override_manifest():
    _, rep, _ = run(["bar-basis", "--fixture", "com-strict", "--grade-cutoff", "1", "--arity-cutoff", "2"])
    assert rep["cutoffs"] == {"grade": 1, "arity": 2}
    counts = {(c["arity"], c["grade"]): c["count"] for c in rep["cells"]}
    assert counts == {(1, 0): 1, (1, 1): 0, (2, 0): 0, (2, 1): 2}


def test_gamma_command():
    code, rep, _ = run(["gamma", "--fixture", "massey-gf2"])
    assert code == 0
    first = rep["blocks"][0]
    assert (first["grade"], first["degree"], first["quotient"]) == (1, 1, 1)


def test_unknown_fixture_and_missing_file(tmp_path, capsys):
    assert run(["realize", "--fixture", "nope"])[0] == 1
    assert run(["realize", "--manifest", str(tmp_path / "absent.json")])[0] == 1
    assert run(["realize"])[0] == 1
    assert "error" in capsys.readouterr().err


def test_bad_json_is_located(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"schema": 1,\n "field": }')
    assert run(["validate", "--manifest", str(p)])[0] == 1
    assert "line 2" in capsys.readouterr().err
    with pytest.raises(ManifestError):
        read_json(str(p))


@pytest.mark.parametrize("mutate,where", [
    (lambda d: d.pop("field"), "$"),
    (lambda d: d.update(field="GF(4)"), "$.field"),
    (lambda d: d.update(schema=2), "$.schema"),
    (lambda d: d["algebras"]["A"]["basis"].append(["x", 1]), "$.algebras.A.basis"),
    (lambda d: d["alpha"]["product"].append(["x", "q", {"x": 1}]), "$.alpha.product[3]"),
    (lambda d: d["alpha"].update(terms=[[[2, 1, 2], ["x", "x"], {"x": 1}]]), "$.alpha.terms[0]"),
    (lambda d: d.update(f0={"x": {"x": "1/0"}}), "$.f0.x"),
    (lambda d: d.update(cutoffs={"grade": "3"}), "$.cutoffs.grade"),
    (lambda d: d.update(providers={"sigma": {"values": [[[[1, 1]], ["0#"], {}]]}}), "$.providers.sigma.values[0]"),
    (lambda d: d.update(providers={"rho": {"values": [[1]]}}), "$.providers.rho.values[0]"),
])
def test_schema_errors_are_located(mutate, where):
    doc = fixtures.load("com-strict")
    mutate(doc)
    with pytest.raises(ManifestError) as exc:
        build_problem(doc)
    assert exc.value.where.startswith(where)


def test_reports_are_deterministic_with_and_without_cache(tmp_path):
    cache = str(tmp_path / "cache")
    for argv in (["realize", "--fixture", "massey-gf2"], ["homotopy", "--fixture", "homotopy-coboundary"],
                 ["bar-basis", "--fixture", "ass-strict"]):
        plain = [strip_timestamp(run(argv)[2]) for _ in range(2)]
        cold = strip_timestamp(run(argv + ["--cache-dir", cache])[2])
        warm = strip_timestamp(run(argv + ["--cache-dir", cache])[2])
        assert plain[0] == plain[1] == cold == warm
    assert os.listdir(cache)


def test_corrupt_cache_entry_is_rebuilt(tmp_path):
    cache = tmp_path / "cache"
    argv = ["bar-basis", "--fixture", "com-strict", "--cache-dir", str(cache)]
    first = strip_timestamp(run(argv)[2])
    for root, _, files in os.walk(cache):
        for f in files:
            (cache / root / f).write_text("{not json")
    assert strip_timestamp(run(argv)[2]) == first


def test_out_flag_and_input_hash(tmp_path):
    out = tmp_path / "r.json"
    code, rep, text = run(["realize", "--fixture", "com-strict", "--out", str(out)])
    assert code == 0 and text == ""
    rep = json.loads(out.read_text())
    doc = fixtures.load("com-strict")
    assert rep["input_hash"] == content_hash({"manifest": doc, "flags": {"grade_cutoff": None, "arity_cutoff": None}})
    assert "timestamp" in rep
    assert list(rep) == sorted(rep)


def test_manifest_file_matches_fixture(tmp_path):
    doc = fixtures.load("massey-gf2")
    a = strip_timestamp(run(["realize", "--fixture", "massey-gf2"])[2])
    b = strip_timestamp(run(["realize", "--manifest", write(tmp_path, doc)])[2])
    assert a == b


def test_table_operad_manifest_matches_builtin(tmp_path):
    doc = fixtures.load("com-strict")
    doc["operad"] = com_table(3)
    doc["alpha"] = {"action": [[str(r), ins, {"x" if "x" in ins else "1": 1}]
                               for r, ins in [("2", ["1", "1"]), ("2", ["1", "x"]), ("2", ["x", "1"]),
                                              ("3", ["1", "1", "1"]), ("3", ["x", "1", "1"]),
                                              ("3", ["1", "x", "1"]), ("3", ["1", "1", "x"])]]}
    code, rep, _ = run(["realize", "--manifest", write(tmp_path, doc)])
    assert code == 0
    _, ref, _ = run(["realize", "--fixture", "com-strict"])
    assert rep["stages"] == ref["stages"]
    doc["alpha"]["action"].append(["9", ["1", "1"], {"1": 1}])
    with pytest.raises(ManifestError) as exc:
        build_problem(doc)
    assert exc.value.where == "$.alpha.action[7]"
