import json
from pathlib import Path

import pytest

from critpoly.cli import main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(tmp_path, *argv):
    path = tmp_path / "r.json"
    assert main([*argv, "--json-out", str(path)]) == 0
    data = json.loads(path.read_text())
    data.pop("wall_time")
    return data


def test_trott_counts(capsys, tmp_path):
    data = report(tmp_path, "solve-ed", "--model", str(FIXTURES / "trott.json"), "--u", "7/8,1/100")
    assert data["found_count"] == 16 and data["real_count"] == 10
    assert data["expected_count"] == 16


def test_circle_minimizer(capsys):
    code, out, _ = run(capsys, "solve-ed", "--model", str(FIXTURES / "circle.json"), "--u", "2,0")
    assert code == 0
    assert "minimizer: [1.0, 0.0]" in out


def test_random_space_curve(tmp_path):
    data = report(tmp_path, "solve-ed", "--random-degrees", "2,2", "--n", "3", "--seed", "1")
    assert data["found_count"] == 12


def test_report_is_deterministic(tmp_path):
    argv = ("solve-cegm", "--k", "2", "--m", "6", "--seed", "3")
    assert report(tmp_path, *argv) == report(tmp_path, *argv)


def test_threads_flag_does_not_change_solutions(tmp_path):
    a = report(tmp_path, "solve-ed", "--random-degrees", "3,2", "--seed", "2", "--threads", "1")
    b = report(tmp_path, "solve-ed", "--random-degrees", "3,2", "--seed", "2", "--threads", "3")
    assert a["solutions"] == b["solutions"]


def test_discrete_mle_closed_form(capsys, tmp_path):
    data = report(tmp_path, "solve-mle", "discrete", "--model", "coin", "--u", "1,1,1")
    assert data["details"]["maximizer"] == pytest.approx([0.36, 0.24, 0.4], abs=1e-10)


def test_gaussian_mle(tmp_path):
    data = report(tmp_path, "solve-mle", "gaussian-conc", "--k", "3", "--seed", "1")
    assert data["found_count"] == data["expected_count"] == 9


def test_degree_output(capsys):
    code, out, _ = run(capsys, "degree", "cegm", "--k", "2", "--m", "13")
    assert code == 0 and out.split()[0] == "3628800"
    code, out, _ = run(capsys, "degree", "ed-ci", "--n", "2", "--c", "1", "--degs", "4")
    assert out.split()[0] == "16"


def test_pde_checks(capsys):
    code, out, _ = run(capsys, "pde", "hankel-wave", "--u", "1,2,4,8,16,32,64", "--psi", "x1*x2*x3")
    assert code == 0 and "verified=True" in out
    code, out, _ = run(capsys, "pde", "membership", "--f", "x1")
    assert "in_ideal=False" in out


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "solve-ed", "--model", str(FIXTURES / "circle.json"), "--u", "2,abc")
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "pde", "membership", "--f", "x1 + * x2")
    assert code == 2


def test_strict_mismatch_exit_code(capsys, tmp_path):
    model = tmp_path / "m.json"
    model.write_text(json.dumps({"variables": ["x1", "x2"], "generators": ["x1^2 + x2^2 - 1"],
                                 "codim": 1, "expected_count": 5}))
    code, _, err = run(capsys, "solve-ed", "--model", str(model), "--u", "2,0", "--strict")
    assert code == 3 and "mismatch" in err
    code, _, _ = run(capsys, "solve-ed", "--model", str(model), "--u", "2,0")
    assert code == 0
