import numpy as np
import pytest

from zonalproj.cli import main, read_body, write_body
from zonalproj.errors import ParseError
from zonalproj.oracles import ELLIPSOID, BodyOracle


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_multipliers_fourier_n4(capsys):
    code, out, _ = run(capsys, "multipliers", "--transform", "fourier", "--n", "4", "--p", "-2", "--K", "8")
    assert code == 0
    rows = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert len(rows) == 5 and all(ln.endswith("exact") for ln in rows)


def test_multipliers_csv(capsys):
    code, out, _ = run(capsys, "multipliers", "--transform", "box", "--n", "3", "--K", "4", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "degree,multiplier"
    assert len(lines) == 6


def test_multipliers_requires_n(capsys):
    code, _, err = run(capsys, "multipliers", "--transform", "cosine")
    assert code == 2 and "--n" in err


def test_lambda_sweep(capsys, tmp_path):
    out_file = tmp_path / "sweep.csv"
    code = main(["lambda-sweep", "--n", "4", "--j", "1", "--steps", "5", "--out", str(out_file)])
    text = out_file.read_text()
    assert code == 0
    assert text.startswith("lambda,firey")
    assert text.count("# admissible") == 2 and text.count("# membership") == 2
    assert len([ln for ln in text.splitlines() if not ln.startswith(("#", "lambda"))]) == 5


def test_counterexample_exit_codes(capsys):
    code, out, _ = run(capsys, "counterexample", "--epsilon", "0.1")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "counterexample", "--epsilon", "1.0")
    assert code == 1 and "FAIL" in out


def test_counterexample_csv_grid(capsys):
    code, out, _ = run(capsys, "counterexample", "--epsilon", "0.01", "--format", "csv", "--steps", "7")
    rows = out.strip().splitlines()[1:]
    assert len(rows) == 7
    for row in rows:
        _, v, c = map(float, row.split(","))
        assert v == pytest.approx(c, abs=1e-9)


@pytest.mark.parametrize("preset", ["cube", "ball", "ellipsoid", "parallelotope"])
def test_verify_pair_presets(capsys, preset):
    code, out, _ = run(capsys, "verify-pair", "--preset", preset, "--n", "4", "--j", "2", "--samples", "50")
    assert code == 0 and "result: PASS" in out


def test_verify_pair_body_files(capsys, tmp_path):
    K = BodyOracle(ELLIPSOID, np.diag([1.0, 2.0, 3.0]))
    kf = tmp_path / "k.txt"
    kf.write_text(write_body(K))
    code, out, _ = run(capsys, "verify-pair", "--body-k", str(kf), "--j", "1", "--samples", "30")
    assert code == 0
    lf = tmp_path / "l.txt"
    lf.write_text(write_body(BodyOracle.ball(3)))
    code, out, _ = run(capsys, "verify-pair", "--body-k", str(kf), "--body-l", str(lf), "--j", "1",
                       "--samples", "30")
    assert code == 1 and "FAIL" in out


def test_body_round_trip(tmp_path):
    for body in (BodyOracle.ball(4, 0.5), BodyOracle.cube(3),
                 BodyOracle(ELLIPSOID, np.array([[1.0, 0.5], [0.0, 2.0]]))):
        f = tmp_path / "b.txt"
        f.write_text(write_body(body))
        back = read_body(str(f))
        assert back.kind == body.kind and back.ambient == body.ambient
        np.testing.assert_array_equal(back.matrix(), body.matrix())


@pytest.mark.parametrize("text,line", [
    ("simplex\n1 0\n0 1\n", 1),
    ("parallelotope\n1 0 0\n0 1\n0 0 1\n", 3),
    ("ellipsoid\n1 0\n0 x\n", 3),
    ("ball\n1.0\n", 2),
    ("# comment\n\nparallelotope\n1 2\n2 4\n", 4),
])
def test_body_parse_errors(tmp_path, text, line):
    f = tmp_path / "bad.txt"
    f.write_text(text)
    with pytest.raises(ParseError) as info:
        read_body(str(f))
    assert info.value.line == line
    assert f"bad.txt:{line}:" in str(info.value)


def test_bad_body_exits_2(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("ellipsoid\n1 0\n0 x\n")
    code, _, err = run(capsys, "verify-pair", "--body-k", str(f), "--j", "1")
    assert code == 2 and "bad.txt:3:" in err


def test_partner_command(capsys, tmp_path):
    prof = tmp_path / "p.txt"
    prof.write_text("5 2 even\n1.0\n0\n0.1\n")
    out_file = tmp_path / "partner.txt"
    code, out, _ = run(capsys, "partner", "--profile", str(prof), "--j", "2", "--partner-out", str(out_file))
    assert code == 0
    assert "5 2 even" in out_file.read_text()
    assert out.count("PASS") == 2


def test_partner_profile_parse_error(capsys, tmp_path):
    prof = tmp_path / "p.txt"
    prof.write_text("5 2 even\n1.0\n0\n")
    code, _, err = run(capsys, "partner", "--profile", str(prof), "--j", "2")
    assert code == 2 and "p.txt:3:" in err


def test_factorization_command(capsys):
    code, out, _ = run(capsys, "factorization", "--n", "5", "--j", "2")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "factorization", "--n", "4", "--j", "2", "--format", "csv")
    assert code == 0 and out.startswith("n,j,k,")


@pytest.mark.parametrize("name", ["fourier-inversion", "factorization", "counterexample"])
def test_experiments(capsys, name):
    code, out, _ = run(capsys, "experiment", name)
    assert code == 0
    assert "[FAIL]" not in out and "[PASS]" in out


def test_experiment_csv(capsys):
    code, out, _ = run(capsys, "experiment", "fourier-inversion", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "experiment,check,passed,detail" and len(lines) == 5
