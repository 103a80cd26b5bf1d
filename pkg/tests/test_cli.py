import io
import json

import pytest

from gensym.cli import main
from gensym.models import CATALOG


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_list_models():
    code, out, _ = run("list-models")
    assert code == 0
    assert [ln.split()[0] for ln in out.splitlines()] == list(CATALOG)


def test_analyze_json():
    code, out, _ = run("analyze", "--model", "type1", "--param", "lambda=1", "--param", "eta=1",
                       "--points", "20", "--seed", "7")
    assert code == 0
    rep = json.loads(out)
    assert rep["classification"]["label"] == "TypeI"
    assert len(rep["points"]) == 20 and rep["seed"] == 7
    assert run("analyze", "--model", "type1", "--param", "lambda=1", "--param", "eta=1",
               "--points", "20", "--seed", "7")[1] == out


def test_analyze_writes_file(tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run("analyze", "--model", "type2", "--points", "3", "--json", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["model"] == "type2"


def test_classify_text_and_json():
    code, out, _ = run("classify", "--model", "type2", "--points", "5")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "TypeII"
    assert lines[-1].split() == ["yes", "type_II"]
    code, out, _ = run("classify", "--model", "type3", "--param", "lambda=0", "--points", "5", "--json", "-")
    assert json.loads(out)["classification"]["label"] == "TypeIII_conformallyFlat"


def test_explicit_point():
    code, out, _ = run("analyze", "--model", "typeC", "--point", "0.1,0.2,0.3,0.4")
    assert code == 0
    assert json.loads(out)["points"][0]["point"] == [0.1, 0.2, 0.3, 0.4]


def test_jacobi_solution_and_failure(tmp_path):
    code, out, _ = run("jacobi", "--a3", "2", "--b5", "-4")
    lines = out.splitlines()
    assert code == 0
    assert len(lines) == 15
    assert all(float(ln.split()[1]) == 0.0 for ln in lines[:14])
    assert lines[-1] == "max |residual| = 0.0"
    code, _, _ = run("jacobi", "--a3", "1", "--a6", "1", "--b1", "1")
    assert code == 1
    pf = tmp_path / "p.json"
    pf.write_text(json.dumps({"a3": 2, "b5": -4}))
    assert run("jacobi", "--params-file", str(pf))[0] == 0
    pf.write_text(json.dumps({"zz": 1}))
    code, _, err = run("jacobi", "--params-file", str(pf))
    assert code == 2 and "unknown bracket" in err


def test_lie_builtin():
    code, out, _ = run("lie", "--builtin", "type2", "--param", "alpha=1")
    assert code == 0
    doc = json.loads(out)
    assert doc["jacobi_residual"] < 1e-12
    assert len(doc["Wplus"]) == 3


def test_extend(tmp_path):
    s = tmp_path / "surf.json"
    s.write_text(json.dumps({"gamma": {"112": "y"}}))
    code, out, _ = run("extend", "--surface", str(s))
    assert code == 0
    doc = json.loads(out)
    assert doc["metric"]["coords"] == ["x", "y", "u", "v"]
    code, out, _ = run("extend", "--surface", str(s), "--analyze", "--points", "3")
    assert code == 0 and "report" in json.loads(out)


def test_missing_file():
    code, _, err = run("analyze", "--metric-file", "/nonexistent/m.json")
    assert code == 2 and "file not found" in err


@pytest.mark.parametrize("argv", [
    ("analyze", "--model", "type1", "--param", "lambda=abc"),
    ("analyze", "--model", "type1", "--param", "gamma=1"),
    ("analyze", "--model", "nope"),
    ("analyze",),
    ("frobnicate",),
    ("analyze", "--model", "type1", "--point", "1,2,3"),
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_degenerate_metric_exit_3(tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"g": [["x", "0", "0", "0"], [None, "1", "0", "0"],
                                   [None, None, "1", "0"], [None, None, None, "1"]]}))
    code, _, err = run("analyze", "--metric-file", str(m), "--point", "0,0.5,0,0")
    assert code == 3 and "numerical domain error" in err and "0.5" in err


def test_syntax_error_in_metric_file(tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"g": [["x + * y", "0", "0", "0"], [None, "1", "0", "0"],
                                   [None, None, "1", "0"], [None, None, None, "1"]]}))
    assert run("analyze", "--metric-file", str(m))[0] == 2


@pytest.mark.slow
def test_verify_appendix_cli(tmp_path):
    target = tmp_path / "v.json"
    code, out, _ = run("verify-appendix", "--json", str(target))
    assert code == 0
    assert json.loads(target.read_text())["passed"] is True
    assert out.rstrip().endswith("rows pass")
