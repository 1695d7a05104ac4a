import dataclasses
import importlib
import io
import json

import pytest

from spheredeg.cli import main
from spheredeg.fields import PolyField


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def strip_time(text):
    data = json.loads(text)
    data.pop("timestamp", None)
    return data


@pytest.fixture
def saddle(tmp_path):
    p = tmp_path / "saddle.json"
    p.write_text(PolyField.linear([[1, 0], [0, -1]]).to_json())
    return str(p)


def test_degree_table_csv():
    code, out, _ = run("degree-table", "--n-max", "2", "--m-min", "-4", "--m-max", "4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,m,degree,method,mesh_level"
    assert len(lines) == 1 + 2 * 9
    for row in lines[1:]:
        n, m, d, method, level = row.split(",")
        assert m == d


def test_morse_check_disk_constant():
    code, out, _ = run("morse-check", "--scenario", "disk_constant.json")
    assert code == 0
    assert json.loads(out)["formula_holds"] is True


def test_index_saddle(saddle):
    code, out, _ = run("index", "--field", saddle, "--zero", "0,0", "--radius", "0.5")
    assert code == 0
    assert json.loads(out)["index"] == -1


def test_construct_then_degree(tmp_path):
    code, out, _ = run("construct-map", "--n", "2", "--m", "-3")
    assert code == 0
    p = tmp_path / "a.json"
    p.write_text(out)
    code, out, _ = run("degree", "--field", str(p))
    assert code == 0 and json.loads(out)["degree"] == -3


def test_suspend_and_lemma21(saddle, tmp_path):
    code, out, _ = run("suspend", "--field", saddle, "--sign", "-1")
    assert code == 0
    assert PolyField.from_json(out).dim == 3
    code, out, _ = run("lemma21", "--field", saddle, "--sign", "-1")
    assert code == 0
    rep = json.loads(out)
    assert rep["relation_holds"] is True


def test_bad_input_exit_one(tmp_path):
    code, out, err = run("index", "--field", str(tmp_path / "missing.json"), "--zero", "0,0")
    assert code == 1 and out == ""
    assert "error" in json.loads(err)


def test_bad_flag_exit_one():
    code, _, err = run("degree-table", "--n-max", "x")
    assert code == 1
    json.loads(err)


def test_not_a_zero_exit_one(saddle):
    code, _, err = run("index", "--field", saddle, "--zero", "0.3,0")
    assert code == 1
    assert json.loads(err)["error"] == "NotAZeroError"


def test_disagreement_exit_two(tmp_path, monkeypatch):
    mod = importlib.import_module("spheredeg.degree")
    real = mod._winding

    def off_by_one(*a, **k):
        rep = real(*a, **k)
        return dataclasses.replace(rep, degree=rep.degree + 1)

    monkeypatch.setattr(mod, "_winding", off_by_one)
    p = tmp_path / "id.json"
    p.write_text(PolyField.identity(2).to_json())
    code, _, err = run("degree", "--field", str(p))
    assert code == 2
    assert json.loads(err)["error"] == "CrossCheckError"


def test_deterministic_modulo_timestamp():
    a = run("morse-check", "--scenario", "ball_saddle.json", "--seed", "7")
    b = run("morse-check", "--scenario", "ball_saddle.json", "--seed", "7")
    assert a[0] == b[0] == 0
    assert strip_time(a[1]) == strip_time(b[1])
    assert json.loads(a[1])["rng"].startswith("numpy.random.default_rng")
