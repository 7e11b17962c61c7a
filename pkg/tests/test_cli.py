import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from fraclyap.cli import main
from fraclyap.green import green_max_closed_form, green_table
from fraclyap.problemfile import ProblemFile, load_problem, save_problem
from fraclyap.solver import solve_linear_direct

ROOT = Path(__file__).resolve().parents[1]
EX1 = ROOT / "problems" / "example1.json"
EX2 = ROOT / "problems" / "example2.json"


def run(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(out):
    return json.loads(out)


def read_csv(path):
    lines = Path(path).read_text().splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


def test_module_entry_point():
    cp = subprocess.run([sys.executable, "-m", "fraclyap", "--help"], capture_output=True, text=True)
    assert cp.returncode == 0, cp.stderr
    assert "green" in cp.stdout and "reproduce" in cp.stdout


def test_green_csv(capsys, tmp_path):
    out = tmp_path / "g.csv"
    code, stdout, _ = run(capsys, "green", "--alpha", 1.5, "--b", 3, "--out", out)
    assert code == 0
    rep = report(stdout)
    assert rep["outputs"]["max"] == pytest.approx(green_max_closed_form(1.5, 3), rel=1e-12)
    assert rep["outputs"]["max"] == pytest.approx(1.2988, abs=2e-4)
    assert rep["outputs"]["argmax"] == {"t": 2.5, "s": 2}
    assert rep["outputs"]["window"]["grid_indices"] == [1, 2]
    header, rows = read_csv(out)
    assert header == ["t\\s", "0", "1", "2", "3", "4"]
    assert len(rows) == 5
    table = np.array([[float(v) for v in r[1:]] for r in rows])
    np.testing.assert_array_equal(table, green_table(1.5, 3).values)
    assert b"\r\n" not in out.read_bytes()


def test_green_alpha_two_matches_oracle(capsys, tmp_path):
    out = tmp_path / "g.json"
    code, _, _ = run(capsys, "green", "--alpha", 2, "--b", 2, "--out", out, "--format", "json")
    assert code == 0
    values = np.array(json.loads(out.read_text())["values"])
    for s in range(4):
        col = solve_linear_direct(2.0, 2, np.eye(4)[s]).values[1:-1]
        np.testing.assert_allclose(values[:, s], col, rtol=1e-9)


def test_green_bad_alpha(capsys):
    code, _, err = run(capsys, "green", "--alpha", 2.5, "--b", 3)
    assert code == 2
    assert "alpha must be in (1,2]" in err


def test_green_missing_argument():
    with pytest.raises(SystemExit) as info:
        main(["green", "--alpha", "1.5"])
    assert info.value.code == 2


def test_solve_example(capsys, tmp_path):
    out = tmp_path / "sol.csv"
    code, stdout, _ = run(capsys, "solve", "--spec", EX1, "--out", out)
    assert code == 0
    rep = report(stdout)["outputs"]
    assert rep["converged"] and rep["residual_sup"] < 1e-9
    assert rep["norm"] <= 1.0 and rep["cone_check"]
    assert rep["norm_bounds"]["upper_holds"] and rep["norm_bounds"]["lower_holds"]
    header, rows = read_csv(out)
    assert header == ["k", "t", "y", "residual_term"]
    assert [r[0] for r in rows] == ["-1", "0", "1", "2", "3", "4", "5"]
    assert rows[0][2] == "0" and rows[-1][2] == "0"
    assert rows[0][3] == "" and rows[-1][3] == ""


def test_solve_inline_zero_f(capsys):
    code, stdout, _ = run(capsys, "solve", "--alpha", 1.5, "--b", 3, "--q", "t", "--f", "0")
    assert code == 0
    rep = report(stdout)["outputs"]
    assert rep["iterations"] == 1
    assert rep["y"] == [0.0] * 7


def test_solve_forced_nonconvergence(capsys, tmp_path):
    out = tmp_path / "sol.json"
    code, stdout, _ = run(capsys, "solve", "--spec", EX1, "--max-iter", 1, "--out", out, "--format", "json")
    assert code == 3
    assert json.loads(out.read_text())["converged"] is False
    assert report(stdout)["warnings"]


def test_solve_bad_expression(capsys):
    code, _, err = run(capsys, "solve", "--alpha", 1.5, "--b", 3, "--q", "t +", "--f", "y")
    assert code == 2
    assert "byte offset" in err


def test_solve_missing_inputs(capsys):
    code, _, _ = run(capsys, "solve", "--alpha", 1.5)
    assert code == 2


def test_certify_paper_variant(capsys):
    code, stdout, _ = run(capsys, "certify", "--spec", EX2, "--theorem", "3.6", "--variant", "paper")
    assert code == 0
    out = report(stdout)["outputs"]
    assert out["lhs"] == 12.5
    assert out["rhs"] == pytest.approx(0.15, abs=2e-2)
    assert list(out)[:6] == ["lhs", "rhs", "branch", "theorem", "variant", "satisfied"]
    assert out["satisfied"] is True


def test_certify_exact_variant_warns(capsys):
    code, stdout, _ = run(capsys, "certify", "--spec", EX2, "--theorem", "3.6", "--variant", "exact")
    assert code == 0
    rep = report(stdout)
    assert rep["outputs"]["rhs"] == pytest.approx(0.00125, rel=1e-6)
    assert any("discrepancy" in w for w in rep["warnings"])


def test_certify_auto_eta(capsys):
    code, stdout, _ = run(capsys, "certify", "--spec", EX2, "--theorem", "3.4", "--auto-eta")
    assert code == 0
    out = report(stdout)["outputs"]
    assert out["eta"] > 0 and out["theorem"] == "th3_4"


def test_certify_zero_q_violated(capsys, tmp_path):
    spec = tmp_path / "zero.json"
    save_problem(ProblemFile(alpha=1.5, b=3, q="0", f="y"), spec)
    code, stdout, _ = run(capsys, "certify", "--spec", spec, "--theorem", "3.4", "--eta", 1.0)
    assert code == 4
    assert report(stdout)["outputs"]["lhs"] == 0.0


def test_certify_needs_eta(capsys):
    code, _, _ = run(capsys, "certify", "--spec", EX2, "--theorem", "3.4")
    assert code == 2


def test_constants(capsys):
    code, stdout, _ = run(capsys, "constants", "--spec", EX1, "--lambda", 0.03779)
    assert code == 0
    out = report(stdout)["outputs"]
    assert out["gamma_paper"] == pytest.approx(0.0616, abs=1e-3)
    assert out["gamma_star_paper"] == pytest.approx(1.6301, abs=5e-3)
    assert out["hypotheses"]["passed"] is True


def test_eigen_bound(capsys):
    code, stdout, _ = run(capsys, "eigen-bound", "--alpha", 1.5, "--b", 3)
    assert code == 0
    assert report(stdout)["outputs"]["radius"] == pytest.approx(0.154, abs=1e-4)


def test_eigen_bound_verify(capsys):
    code, stdout, _ = run(capsys, "eigen-bound", "--alpha", 2, "--b", 2, "--verify")
    assert code == 0
    out = report(stdout)["outputs"]
    assert out["all_outside"] and out["min_abs_eigenvalue"] > out["radius"]
    assert len(out["spectrum"]) == 4


def test_eigen_bound_bad_b(capsys):
    code, _, _ = run(capsys, "eigen-bound", "--alpha", 1.5, "--b", 1)
    assert code == 2


@pytest.mark.parametrize("example", [1, 2])
def test_reproduce(capsys, tmp_path, example):
    out = tmp_path / "rep.json"
    code, stdout, _ = run(capsys, "reproduce", "--example", example, "--report", out)
    assert code == 0
    assert "PASS" in stdout and "FAIL" not in stdout
    assert json.loads(out.read_text())["all_passed"] is True


def test_reproduce_unknown_example():
    with pytest.raises(SystemExit) as info:
        main(["reproduce", "--example", "3"])
    assert info.value.code == 2


def test_outputs_are_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "solve", "--spec", EX1, "--out", a)
    run(capsys, "solve", "--spec", EX1, "--out", b)
    assert a.read_bytes() == b.read_bytes()
    _, s1, _ = run(capsys, "green", "--alpha", 1.75, "--b", 6)
    _, s2, _ = run(capsys, "green", "--alpha", 1.75, "--b", 6)
    assert s1 == s2


def test_problem_file_round_trip(tmp_path):
    original = load_problem(EX2)
    path = tmp_path / "copy.json"
    save_problem(original, path)
    again = load_problem(path)
    assert again == original
    assert again.to_spec() == original.to_spec()
    assert again.prefactor_value() == pytest.approx(1 / 120)


def test_problem_file_rejects_unknown_fields(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"alpha": 1.5, "b": 3, "q": "t", "f": "y", "colour": "red"}))
    code, _, err = run(capsys, "solve", "--spec", path)
    assert code == 2 and "colour" in err
