import json
import subprocess
import sys
from importlib import resources

import numpy as np
import pytest

from qppldpc import alist, example_code
from qppldpc.cli import main

from test_gf2 import CODE_II_WEIGHTS


def spec_path(label):
    return str(resources.files("qppldpc").joinpath("codes", f"code_{label}.json"))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_code_II(capsys, tmp_path):
    path = tmp_path / "ii.alist"
    code, out, _ = run(capsys, "construct", "--spec", spec_path("II"), "--alist", path)
    assert code == 0
    info = json.loads(out)
    assert (info["girth"], info["beta"], info["gamma"], info["rank"]) == (8, 12, 6, 504)
    H = alist.read_alist(path)
    assert H.shape == (504, 1008)
    assert (H.col_weights() == 3).all() and (H.row_weights() == 6).all()
    assert H == example_code("II").parity_check()


def test_girth_both_modes(capsys):
    _, out, _ = run(capsys, "girth", "--spec", spec_path("IX"))
    _, out2, _ = run(capsys, "girth", "--spec", spec_path("IX"), "--exhaustive")
    assert json.loads(out)["girth"] == json.loads(out2)["girth"] == 8


def test_qc_then_dmin(capsys, tmp_path):
    w = tmp_path / "w.json"
    code, _, _ = run(capsys, "qc", "--spec", spec_path("II"), "--weights", w)
    assert code == 0
    data = json.loads(w.read_text())
    assert np.array_equal(np.array(data["weight_matrix"]), CODE_II_WEIGHTS)
    assert data["block_size"] == 84
    assert [len(o) for o in data["first_rows"][0]] == CODE_II_WEIGHTS[0].tolist()
    code, out, _ = run(capsys, "dmin", "--weights", w, "--recursive")
    res = json.loads(out)
    assert code == 0 and res["bound"] == 62
    assert set(res) >= {"bound", "S", "method", "elapsed"}


def test_dmin_code_I(capsys, tmp_path):
    w = tmp_path / "w.json"
    run(capsys, "qc", "--spec", spec_path("I"), "--weights", w)
    _, out, _ = run(capsys, "dmin", "--weights", w)
    assert json.loads(out)["bound"] == 22


def test_nncs_deterministic(capsys):
    args = ("nncs", "--spec", spec_path("I"), "--mode", "pair", "--budget", 40, "--seed", 3)
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    ra, rb = json.loads(a), json.loads(b)
    ra.pop("elapsed"), rb.pop("elapsed")
    assert ra == rb
    H = example_code("I").parity_check()
    word = np.zeros(504, dtype=np.uint8)
    word[ra["codeword"]] = 1
    assert ra["bound"] == word.sum() and not H.syndrome(word).any()


def test_search(capsys, tmp_path):
    prof = tmp_path / "p.json"
    prof.write_text(json.dumps({"lambda": 3, "rho": 6, "n": 1008}))
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "search", "--profile", prof, "--girth-target", 8, "--out", out)
    rep = json.loads(out.read_text())
    assert code == 0 and rep["chosen"]["girth"] == 8


def test_simulate(capsys, tmp_path):
    csv, nc = tmp_path / "s.csv", tmp_path / "nc.json"
    args = ("simulate", "--spec", spec_path("I"), "--ebno", "0.5,1.0", "--max-frames", 200,
            "--stop-errors", 20, "--iters", 20, "--seed", 1, "--out", csv, "--nc-log", nc)
    code, _, _ = run(capsys, *args)
    assert code == 0
    first = csv.read_text()
    assert len(first.splitlines()) == 3
    run(capsys, *args)
    assert csv.read_text() == first
    assert isinstance(json.loads(nc.read_text()), list)


@pytest.mark.parametrize("payload,field", [
    ({"lambda": 3, "rho": 6, "n": 504, "f1": 5}, "f2"),
    ({"lambda": 3, "rho": "6", "n": 504, "f1": 5, "f2": 210}, "rho"),
    ({"lambda": 3, "rho": 6, "n": 504, "N": 1500, "f1": 5, "f2": 210}, "N"),
    ({"lambda": 3, "rho": 6, "n": 504, "f1": 2, "f2": 210}, "f1"),
    ({"lambda": 3, "rho": 6, "n": 504, "f1": 5, "f2": 210, "name": 7}, "name"),
])
def test_malformed_code_file(capsys, tmp_path, payload, field):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(payload))
    code, _, err = run(capsys, "girth", "--spec", p)
    assert code != 0
    assert f"'{field}'" in err


def test_malformed_weights_and_json(capsys, tmp_path):
    p = tmp_path / "w.json"
    p.write_text(json.dumps({"weights": [[1]]}))
    code, _, err = run(capsys, "dmin", "--weights", p)
    assert code != 0 and "weight_matrix" in err
    p.write_text("{not json")
    code, _, err = run(capsys, "dmin", "--weights", p)
    assert code != 0 and "invalid JSON" in err


def test_numeric_parse_errors_fatal(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--spec", spec_path("I"), "--ebno", "1.5,x", "--out", str(tmp_path / "s")])
    assert exc.value.code != 0
    with pytest.raises(SystemExit):
        main(["nncs", "--spec", spec_path("I"), "--budget", "ten"])


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "girth", "--spec", tmp_path / "nope.json")
    assert code != 0 and "nope.json" in err


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "qppldpc.cli", "girth", "--spec", spec_path("I")],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["girth"] == 8
