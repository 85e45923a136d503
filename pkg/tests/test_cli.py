import csv
import io
import subprocess
import sys

import pytest

from stabtherm.cli import fmt, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def table(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def data_lines(text):
    return [line for line in text.splitlines() if not line.startswith("# timestamp")]


def test_fmt():
    assert fmt(0.1) == "0.1"
    assert fmt(1 / 3) == "0.333333333333333"
    assert fmt(True) == "true" and fmt(7) == "7" and fmt(None) == ""
    assert fmt(float("inf")) == "inf"


def test_curve_high_t(capsys):
    code, out, _ = run(["curve", "--structure", "s1", "--k", "2", "--tmin", "5e3", "--tmax", "1e4"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# command: curve"
    assert any(line.startswith("# timestamp:") for line in lines)
    rows = table(out)
    assert list(rows[0]) == ["T", "m_rel", "m2", "m0", "chi", "energy"]
    assert len(rows) == 50
    assert all(abs(float(r["m_rel"]) - 1) < 1e-3 for r in rows)


def test_tchimax_line(capsys):
    code, out, _ = run(["tchimax", "--structure", "line", "--sizes", "3"], capsys)
    assert code == 0
    (row,) = table(out)
    assert abs(float(row["t_star"]) - 1.07) < 0.01
    assert row["n_spins"] == "3"


def test_tchimax_fit(capsys):
    code, out, _ = run(["tchimax", "--structure", "s3", "--sizes", "2", "4", "8", "--fit"], capsys)
    assert code == 0
    assert "shift-law fit" in out.splitlines()[-1]
    assert len(table(out)) == 3


def test_mc_columns_and_idempotence(capsys, tmp_path):
    argv = ["mc", "--structure", "s3", "--k", "2", "--temps", "0.9", "1.4", "--samples", "2000", "--seed", "5"]
    code, out1, _ = run(argv, capsys)
    assert code == 0
    rows = table(out1)
    assert list(rows[0]) == ["T", "m_rel", "m2", "m0", "chi", "energy", "se_m_rel", "se_chi", "chi_analytic"]
    assert [r["T"] for r in rows] == ["0.9", "1.4"]
    _, out2, _ = run(argv, capsys)
    assert data_lines(out1) == data_lines(out2)
    path = tmp_path / "mc.csv"
    _, out3, _ = run(argv + ["--out", str(path), "--jobs", "2"], capsys)
    assert out3 == ""
    # worker count changes the manifest but not the rows
    rows_only = lambda t: [line for line in t.splitlines() if not line.startswith("#")]
    assert rows_only(path.read_text()) == rows_only(out1)


def test_mc_canonical(capsys):
    code, out, _ = run(["mc", "--structure", "canonical", "--k", "1", "--temps", "1.0", "--samples", "2000"], capsys)
    assert code == 0 and len(table(out)) == 1


def test_verify(capsys):
    code, out, _ = run(["verify"], capsys)
    assert code == 0
    assert "FAIL" not in out
    assert out.splitlines()[-1] == "6/6 suites passed"


def test_transform(capsys):
    code, out, _ = run(["transform", "--structure", "s3", "--k", "1"], capsys)
    assert code == 0
    lines = out.splitlines()
    i = lines.index("# transformed hamiltonian (3 terms)")
    assert sorted(lines[i + 1:]) == ["1", "1 2", "2"]
    assert "CNOT 0 1" in lines


def test_transform_canonical(capsys):
    code, out, _ = run(["transform", "--structure", "canonical", "--k", "2"], capsys)
    assert code == 0
    lines = out.splitlines()
    i = lines.index("# transformed hamiltonian (8 terms)")
    assert all(len(line.split()) == 1 for line in lines[i + 1:])


def test_exponents(capsys):
    code, out, _ = run(["exponents", "--structure", "s1", "--k", "5", "--points", "4"], capsys)
    assert code == 0
    rows = table(out)
    assert len(rows) == 4
    for r in rows:
        assert float(r["gamma_nu"]) + 2 * float(r["beta_nu"]) == pytest.approx(1.0)


def test_gap(capsys):
    _, out, _ = run(["gap", "--structure", "canonical", "--k", "2"], capsys)
    assert table(out)[0]["gap"] == "4"
    _, out, _ = run(["gap", "--structure", "s1", "--k", "3"], capsys)
    assert table(out)[0]["gap"] == "2"


def test_errors(capsys):
    code, _, err = run(["curve", "--structure", "s1"], capsys)
    assert code == 2 and "needs --k" in err and "usage" in err
    code, _, err = run(["curve", "--structure", "s1", "--k", "2", "--tmin", "-1"], capsys)
    assert code == 2 and "tmin" in err
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code != 0
    with pytest.raises(SystemExit) as exc:
        main(["curve", "--structure", "nope", "--k", "1"])
    assert exc.value.code != 0


def test_thread_env(monkeypatch):
    from stabtherm.cli import default_jobs

    monkeypatch.setenv("STABTHERM_THREADS", "3")
    assert default_jobs() == 3
    monkeypatch.delenv("STABTHERM_THREADS")
    assert default_jobs() == 1


def test_console_module():
    res = subprocess.run([sys.executable, "-m", "stabtherm.cli", "gap", "--structure", "s1", "--k", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "gap" in res.stdout
