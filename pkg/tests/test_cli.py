"""The qtheta command-line interface."""

import csv
import io
import json
from fractions import Fraction

from qtheta import cli


def _run(capsys, *argv):
    code = cli.run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_list_human(capsys):
    code, out, _ = _run(capsys, "list")
    assert code == cli.EXIT_PASS
    assert "jacobi_triple" in out
    assert "28 identities" in out


def test_list_json(capsys):
    code, out, _ = _run(capsys, "list", "--output", "json")
    assert code == cli.EXIT_PASS
    rows = json.loads(out)
    assert len(rows) == 28
    assert {"identity", "engine", "params", "summary"} <= set(rows[0])


def test_verify_json_schema(capsys):
    code, out, _ = _run(
        capsys, "verify", "theta_expansion", "jacobi_triple",
        "--order", "12", "--points", "2", "--jobs", "1",
        "--output", "json", "--no-timing",
    )
    assert code == cli.EXIT_PASS
    reports = json.loads(out)
    assert len(reports) == 3  # one symbolic + two sampled points
    for rep in reports:
        assert set(rep) == {
            "identity", "params", "point", "order", "window",
            "verdict", "first_diff",
        }
        assert rep["verdict"] == "pass"
        assert rep["first_diff"] is None
        assert set(rep["window"]) == {"q_lo", "q_hi"}
    assert reports[0]["point"] == "symbolic"
    assert all(isinstance(v, str) and "/" in v
               for v in reports[1]["point"].values())


def test_verify_deterministic_bytes(capsys):
    argv = ("verify", "andrews_yee", "psi_product", "--order", "10",
            "--jobs", "1", "--output", "json", "--no-timing")
    code1, out1, _ = _run(capsys, *argv)
    code2, out2, _ = _run(capsys, *argv)
    assert code1 == code2 == cli.EXIT_PASS
    assert out1 == out2


def test_verify_csv(capsys):
    code, out, _ = _run(
        capsys, "verify", "theta_expansion", "--order", "10",
        "--jobs", "1", "--output", "csv", "--no-timing",
    )
    assert code == cli.EXIT_PASS
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["identity", "point", "order", "q_lo", "q_hi", "verdict",
                       "diff_e_q", "diff_e_a", "diff_e_b", "diff_lhs",
                       "diff_rhs"]
    assert rows[1][0] == "theta_expansion"
    assert rows[1][5] == "pass"


def test_output_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = _run(
        capsys, "verify", "psi_product", "--order", "10", "--jobs", "1",
        "--output", "json", "--no-timing", "--output-file", str(target),
    )
    assert code == cli.EXIT_PASS
    assert out == ""
    reports = json.loads(target.read_text())
    assert reports[0]["identity"] == "psi_product"


def test_perturb_exits_fail(capsys):
    code, out, _ = _run(
        capsys, "verify", "theta_expansion", "--perturb", "theta_expansion",
        "--order", "10", "--jobs", "1", "--output", "json", "--no-timing",
    )
    assert code == cli.EXIT_FAIL
    rep = json.loads(out)[0]
    assert rep["verdict"] == "fail"
    diff = rep["first_diff"]
    assert (diff["e_q"], diff["e_a"], diff["e_b"]) == (3, 0, 0)


def test_unknown_identity_usage_error(capsys):
    code, out, err = _run(capsys, "verify", "definitely_not_real")
    assert code == cli.EXIT_USAGE
    assert "unknown identity" in err


def test_bad_flags_usage_error(capsys):
    code, _, err = _run(capsys, "verify", "psi_product", "--order", "0")
    assert code == cli.EXIT_USAGE
    assert "--order" in err
    code, _, _ = _run(capsys, "frobnicate")
    assert code == cli.EXIT_USAGE


def test_expand_csv(capsys):
    code, out, _ = _run(
        capsys, "expand", "poch_inf_q", "--order", "12", "--output", "csv",
    )
    assert code == cli.EXIT_PASS
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["e_q", "e_a", "e_b", "coeff"]
    assert len(rows) == 14  # header + orders 0..12
    coeffs = {int(r[0]): Fraction(r[3]) for r in rows[1:]}
    assert coeffs[0] == 1 and coeffs[1] == -1 and coeffs[5] == 1
    assert coeffs[3] == 0


def test_bench_runs(capsys):
    code, out, _ = _run(
        capsys, "bench", "--order", "6", "--output", "csv", "--no-timing",
    )
    assert code == cli.EXIT_PASS
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) > 28
