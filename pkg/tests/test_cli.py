"""End-to-end tests of the command-line interface and its exit codes."""

import json

import numpy as np
import pytest

from minkstring.cli import main


def run_cli(argv, capsys):
    code = 0
    try:
        ret = main(argv)
        code = 0 if ret is None else ret
    except SystemExit as exc:
        code = exc.code or 0
    out, err = capsys.readouterr()
    return code, out, err


def write_doc(tmp_path, doc, name="doc.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def boost_doc(n=2, a=1.5):
    F = np.zeros((n + 1, n + 1))
    F[0, 1], F[1, 0] = a, -a
    return {"n": n, "F": F.tolist()}


def test_classify_2form_json(tmp_path, capsys):
    code, out, _ = run_cli(
        ["classify-2form", "--input", write_doc(tmp_path, boost_doc())], capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["class"] == "c"
    assert doc["a"] == pytest.approx(1.5)
    assert doc["residual"] <= 1e-8
    assert len(doc["witness"]["lambda"]) == 3


def test_classify_killing_json(tmp_path, capsys):
    doc = boost_doc()
    doc["f"] = [0.0, 0.0, 0.0]
    code, out, _ = run_cli(
        ["classify-killing", "--input", write_doc(tmp_path, doc)], capsys
    )
    assert code == 0
    rep = json.loads(out)
    assert rep["class"] == "d" and rep["dim"] == 2
    assert rep["params"]["a"] == pytest.approx(1.5)


def test_parse_error_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{ not json")
    code, _, err = run_cli(["classify-2form", "--input", str(p)], capsys)
    assert code == 2 and "parse" in err


def test_impossible_translation_exit_4(tmp_path, capsys):
    doc = {
        "n": 2,
        "F": np.zeros((3, 3)).tolist(),
        "f": [0.0, 0.0, 1.0],
        "G": boost_doc()["F"],
        "g": [0.0, 0.0, 0.0],
    }
    code, _, err = run_cli(
        ["classify-pair", "--input", write_doc(tmp_path, doc)], capsys
    )
    assert code == 4


def test_param_violation_exit_5(capsys):
    code, _, err = run_cli(
        [
            "simulate",
            "--class", "a",
            "--params", '{"n": 1, "f0": 1.0}',
            "--z0", '{"x": [0, 0], "P": [0, 0]}',
        ],
        capsys,
    )
    assert code == 5


def test_constraint_violation_exit_6(capsys):
    code, _, err = run_cli(
        [
            "worldsheet",
            "--class", "d",
            "--params", '{"n": 2, "a": 1.0}',
            "--geodesic-z0", '{"x": [1, 0, 0], "P": [1, 1, 0]}',
            "--tau", "0:1:5",
            "--sigma", "0:1:5",
        ],
        capsys,
    )
    assert code == 6


def test_simulate_csv_and_drift(capsys):
    code, out, _ = run_cli(
        [
            "simulate",
            "--class", "d",
            "--params", '{"n": 2, "a": 1.0}',
            "--z0", '{"x": [1, 0, 0.3], "P": [1, 0, 0.2]}',
            "--sigma-max", "1.0",
            "--steps", "10",
            "--method", "exact",
        ],
        capsys,
    )
    assert code == 0
    lines = out.strip().splitlines()
    header = lines[0].split(",")
    assert header[:7] == ["sigma", "x0", "x1", "x2", "P0", "P1", "P2"]
    assert len(lines) == 1 + 11 + 1
    assert lines[-1].startswith("# max_drift=")
    drift = float(lines[-1].split("=")[1])
    assert drift <= 1e-10


def test_simulate_leapfrog_drift_smaller_with_h(capsys):
    drifts = []
    for steps in ("100", "200"):
        _, out, _ = run_cli(
            [
                "simulate",
                "--class", "d",
                "--params", '{"n": 2, "a": 1.0}',
                "--z0", '{"x": [1, 0, 0.3], "P": [1, 0, 0.2]}',
                "--sigma-max", "1.0",
                "--steps", steps,
                "--method", "leapfrog",
            ],
            capsys,
        )
        drifts.append(float(out.strip().splitlines()[-1].split("=")[1]))
    assert 3.0 <= drifts[0] / drifts[1] <= 5.0


def test_worldsheet_mesh_output(tmp_path, capsys):
    mesh = tmp_path / "mesh.json"
    code, out, _ = run_cli(
        [
            "worldsheet",
            "--class", "d",
            "--params", '{"n": 2, "a": 1.0}',
            "--geodesic-z0",
            '{"x": [1, 0, 0.3], "P": [1.019803902718557, 0, 0.2]}',
            "--tau", "0:0.4:17",
            "--sigma", "0:0.4:17",
            "--out", str(mesh),
        ],
        capsys,
    )
    assert code == 0
    assert "max_residual=" in out and "det_max=" in out
    doc = json.loads(mesh.read_text())
    assert np.array(doc["x"]).shape == (17, 17, 3)


def test_verify_suites_pass(capsys):
    code, out, _ = run_cli(
        ["verify", "--suite", "all", "--trials", "5", "--seed", "0"], capsys
    )
    assert code == 0
    assert out.count("PASS") == 4


def test_verify_zero_trials_warns(capsys):
    code, out, err = run_cli(
        ["verify", "--suite", "spectral", "--trials", "0"], capsys
    )
    assert code == 0 and "vacuous" in err


def test_make_testcase_round_trip(tmp_path, capsys):
    code, out, _ = run_cli(
        ["make-testcase", "--class", "g", "--params", '{"n": 2, "f0": -0.7}',
         "--seed", "5"],
        capsys,
    )
    assert code == 0
    path = write_doc(tmp_path, json.loads(out))
    code, out, _ = run_cli(["classify-killing", "--input", path], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["class"] == "g"
    assert rep["params"]["f0"] == pytest.approx(-0.7)
