import json
import subprocess
import sys

import numpy as np
import pytest

from qesqnm.catalog import list_presets
from qesqnm.cli import EXIT_INVALID, EXIT_OK, EXIT_UNSUPPORTED, EXIT_VERIFY, main


def run(args, tmp_path, name="out"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, (out.read_text() if out.exists() else "")


def test_catalog_lists_every_preset(capsys):
    assert main(["catalog"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert [json.loads(l)["id"] for l in lines] == [p.id for p in list_presets()]


def test_solve_scarf2_qnm_example(tmp_path):
    code, text = run(["solve", "--preset", "scarf2-qnm", "--alpha", "1", "--c", "2", "--d", "0", "--N", "3"], tmp_path)
    assert code == EXIT_OK
    doc = json.loads(text)
    E = [complex(*lv["E"]) for lv in doc["levels"]]
    expect = [1 - (n + 0.5) ** 2 - 2j * (n + 0.5) for n in range(4)]
    np.testing.assert_allclose(E, expect, atol=1e-12)
    assert {lv["mode_class"] for lv in doc["levels"]} == {"DecayingQNM"}


def test_verify_mirror_example(tmp_path):
    code, text = run(["verify", "--preset", "morse-qnm-mirror", "--c", "1", "--d", "2", "--N", "2"], tmp_path)
    assert code == EXIT_OK
    checks = {c["name"]: c for c in json.loads(text)["checks"]}
    assert checks["parity equivalence"]["passed"]


def test_solve_scarf1_example_verdict(tmp_path):
    code, text = run(["solve", "--preset", "scarf1", "--N", "1"], tmp_path)
    assert code == EXIT_OK
    assert json.loads(text)["verdict"] == "NonNormalizable"


@pytest.mark.parametrize("preset", list_presets(), ids=lambda p: p.id)
def test_solve_round_trip_is_byte_identical(preset, tmp_path):
    code, first = run(["solve", "--preset", preset.id, "--N", "2"], tmp_path, "a.json")
    assert code == EXIT_OK
    code, again = run(["solve", "--preset", preset.id, "--N", "2"], tmp_path, "b.json")
    assert again == first
    code, back = run(["solve", "--spec-file", str(tmp_path / "a.json")], tmp_path, "c.json")
    assert code == EXIT_OK and back == first
    code, inline = run(["solve", "--spec", json.dumps(json.loads(first)["spec"])], tmp_path, "d.json")
    assert inline == first


@pytest.mark.parametrize(
    "args,code",
    [
        (["solve", "--preset", "nope"], EXIT_INVALID),
        (["solve", "--preset", "genpt-qes-qnm", "--a", "1", "--N", "2"], EXIT_INVALID),
        (["solve", "--spec", "{bad json"], EXIT_INVALID),
        (["solve", "--preset", "scarf2-qnm", "--spec", "{}"], EXIT_INVALID),
        (["solve", "--spec", json.dumps({"A2": [1, 0], "alpha": [1, 0], "gamma": [1, 0]}), "--c", "1"], EXIT_INVALID),
        (["solve", "--spec", json.dumps({"A1": [1, 1], "alpha": [1, 0], "gamma": [1, 0]})], EXIT_INVALID),
        (["solve", "--spec-file", "/nonexistent/spec.json"], EXIT_INVALID),
        (["solve", "--preset", "scarf2-qnm", "--bogus"], EXIT_INVALID),
        (["spectrum", "--preset", "sextic-qes", "--N", "2"], EXIT_INVALID),
        (["solve", "--spec", json.dumps({"P_higher": [[1, 0]], "alpha": [1, 0], "gamma": [1, 0], "N": 1})],
         EXIT_UNSUPPORTED),
        (["verify", "--spec", json.dumps({"A1": [1, 0], "gamma": [1, 0], "Q_higher": [[0, 0], [1, 0]]})],
         EXIT_UNSUPPORTED),
        (["verify", "--preset", "sextic-qes", "--N", "2", "--tol", "-1"], EXIT_VERIFY),
    ],
)
def test_exit_codes(args, code, tmp_path, capsys):
    assert main(args) == code


def test_potential_csv(tmp_path):
    code, text = run(["potential", "--preset", "morse-qes-real", "--N", "2", "--level", "1",
                      "--grid-points", "11"], tmp_path)
    assert code == EXIT_OK
    lines = text.splitlines()
    meta = json.loads(lines[0][2:])
    assert meta["level"] == 1 and set(meta["terms"]) == {"exp(2s)", "exp(s)", "exp(-s)", "exp(-2s)"}
    assert meta["constant"] == pytest.approx([-meta["E"][0], -meta["E"][1]])
    assert lines[1] == "x,V,re_phi,im_phi"
    rows = np.loadtxt(lines[2:], delimiter=",")
    assert rows.shape == (11, 4)
    assert float(lines[2].split(",")[0]) == rows[0, 0]


def test_spectrum_csv(tmp_path):
    code, text = run(["spectrum", "--preset", "scarf2-exact", "--A1", "2.5", "--n-max", "4"], tmp_path)
    assert code == EXIT_OK
    body = [l for l in text.splitlines() if not l.startswith("#")]
    assert body[0] == "n,re_E,im_E,beyond_turnover"
    rows = np.loadtxt(body[1:], delimiter=",")
    np.testing.assert_allclose(rows[:, 1], [5 * n - n * n - 6.25 for n in range(5)])
    assert list(rows[:, 3]) == [0, 0, 0, 1, 1]


def test_param_flag_and_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "qesqnm.cli", "solve", "--preset", "sextic-qes",
                          "--param", "a=1", "--param", "b=1", "--N", "1"], capture_output=True, text=True)
    assert out.returncode == 0
    assert len(json.loads(out.stdout)["levels"]) == 2
