import json

import pytest
from click.testing import CliRunner

from orbiproj.cli import main
from orbiproj.figures import FIGURES

FIG1 = FIGURES["fig1"][0]
P1 = {"type": "P1", "ends": [{"hyp": [0.25, 5]}] * 3, "fiber": [1, 1]}


def run(*args, stdin=None):
    return CliRunner().invoke(main, list(args), input=stdin)


def test_dim_of_237_triangle_group():
    res = run("dim", "--input", json.dumps({"cones": [2, 3, 7]}))
    assert res.exit_code == 0
    assert json.loads(res.stdout) == {"chi": "-1/42", "deform_dim": 0, "teich_dim": 0}


def test_dim_reads_stdin():
    res = run("dim", stdin=json.dumps({"cones": [3, 3, 4]}))
    assert res.exit_code == 0
    assert json.loads(res.stdout)["deform_dim"] == 2


def test_classify_signature_and_matrix():
    res = run("classify", "--input", json.dumps({"cones": [3, 4, 5]}))
    assert res.exit_code == 0
    assert json.loads(res.stdout)["elementary"]["type"] == "P4"
    res = run("classify", "--input", json.dumps({"matrix": [[4, 0, 0], [0, 1, 0], [0, 0, 0.25]]}))
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    assert out["purely_hyperbolic"] is True
    assert out["lambda"] == pytest.approx(0.25)


def test_solve_then_check(tmp_path):
    path = tmp_path / "s.json"
    res = run("solve", "--input", json.dumps(FIG1), "--output", str(path))
    assert res.exit_code == 0
    res = run("check", "--input", str(path))
    assert res.exit_code == 0, res.output
    assert json.loads(res.stdout)["passed"] is True


def test_solve_batch():
    res = run("solve", "--input", json.dumps([FIG1, P1]))
    assert res.exit_code == 0
    assert [s["type"] for s in json.loads(res.stdout)] == ["P2", "P1"]


def test_solve_is_deterministic():
    assert run("solve", "--input", json.dumps(FIG1)).output == run("solve", "--input", json.dumps(FIG1)).output


def test_check_rejects_corrupted_structure(tmp_path):
    data = json.loads(run("solve", "--input", json.dumps(FIG1)).output)
    name = sorted(data["generators"])[0]
    data["generators"][name][0][1] += 1e-3
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    res = run("check", "--input", str(path))
    assert res.exit_code == 1
    assert json.loads(res.stdout)["passed"] is False
    assert json.loads(res.stderr)["error"] == "CheckFailed"


def test_devmap_writes_convex_svg(tmp_path):
    svg, tess = tmp_path / "fig1.svg", tmp_path / "fig1.json"
    res = run("devmap", "--input", json.dumps(FIG1), "--depth", "4", "--output", str(svg),
              "--json", str(tess))
    assert res.exit_code == 0
    data = json.loads(tess.read_text())
    assert data["convexity"]["passed"] is True
    assert svg.read_text().count("<path") == len(data["tiles"])


def test_surgery_script():
    script = {"structures": {"P": P1, "Q": P1},
              "ops": [{"op": "paste", "target": "P", "end": "P.e0", "other": "Q", "other_end": "Q.e0",
                       "params": [0.5, 0.0], "as": "R"},
                      {"op": "fold", "target": "R", "end": "P.e1", "param": 1.0}],
              "result": "R"}
    res = run("surgery", "--input", json.dumps(script))
    assert res.exit_code == 0, res.output
    assert "F" in json.loads(res.stdout)["generators"]


@pytest.mark.parametrize("args", [
    ("dim", "--input", "{not json"),
    ("dim", "--input", json.dumps({"cones": ["x"]})),
    ("solve", "--input", json.dumps({"type": "X9", "ends": []})),
    ("devmap", "--input", json.dumps(P1), "--depth", "-1"),
    ("surgery", "--input", json.dumps({"ops": []})),
    ("check", "--input", "/nonexistent/file.json"),
])
def test_malformed_input_exits_2(args):
    res = run(*args)
    assert res.exit_code == 2
    assert "error" in json.loads(res.stderr)


@pytest.mark.parametrize("args", [
    ("solve", "--input", json.dumps({"type": "A1", "ends": [{"hyp": [0.5, 5]}, {"full": 0.4}], "fiber": [0]})),
    ("surgery", "--input", json.dumps({"structures": {"P": P1}, "ops": [
        {"op": "fold", "target": "P", "end": "P.e0", "param": -1.0}]})),
])
def test_domain_error_exits_1(args):
    res = run(*args)
    assert res.exit_code == 1
    assert json.loads(res.stderr)["error"]
