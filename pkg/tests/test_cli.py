import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from romext import romanovski
from romext.cli import run
from romext.polyreal import RealPoly


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_poly_json_exact(capsys):
    code, out, _ = call(capsys, "poly", "--alpha", "2", "--beta", "4", "--nu", "2")
    assert code == 0
    data = json.loads(out)
    assert data["coefficients"] == ["7/4", "9/2", "45/4"]
    assert RealPoly([Fraction(c) for c in data["coefficients"]]) == romanovski.rodrigues_poly(
        romanovski.RomanovskiParams(2, 4), 2)


def test_poly_csv_precision(capsys):
    code, out, _ = call(capsys, "poly", "--alpha", "1/3", "--beta=-7/2", "--nu", "3", "--output", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["power", "coefficient"]
    R = romanovski.rodrigues_poly(romanovski.RomanovskiParams(Fraction(1, 3), Fraction(-7, 2)), 3)
    for (k, c), exact in zip(rows[1:], R.coeffs):
        assert float(c) == float(exact)  # 17 significant digits round-trip a double


def test_spectrum_example(capsys):
    code, out, _ = call(capsys, "spectrum", "--family", "scarf2", "--A", "3.5", "--B", "1")
    assert [lv["value"] for lv in json.loads(out)["levels"]] == [-12.25, -6.25, -2.25, -0.25]


def test_extend_example(capsys):
    code, out, _ = call(capsys, "extend", "--family", "scarf2", "--A", "3.5", "--B", "1", "--m", "2")
    assert code == 0
    data = json.loads(out)
    assert data["g"] == ["7/4", "9/2", "45/4"]
    assert data["g_params"] == {"alpha": "2", "beta": "4"}
    assert data["spectrum"] == [-30.25, -6.25, -2.25, -0.25]
    assert max(data["partner_residuals"]) < 1e-8
    assert [y["degree"] for y in data["y"]] == [0, 3, 4, 5]


def test_extend_rm_example(capsys):
    code, out, _ = call(capsys, "extend", "--family", "rm1", "--A", "5/2", "--B", "1", "--m", "2", "--K", "1")
    data = json.loads(out)
    assert data["spectrum_exact"][0]["energy"] == "-15/4"
    assert abs(data["spectrum"][1] - (12.25 - 1 / 12.25)) < 1e-12


def test_extend_csv_columns(tmp_path, capsys):
    path = tmp_path / "plot.csv"
    code, _, _ = call(capsys, "extend", "--family", "scarf2", "--A", "3.5", "--B", "1", "--m", "2",
                      "--output", "csv", "--out", str(path), "--samples", "11")
    assert code == 0
    raw = path.read_bytes()
    assert b"\r" not in raw
    rows = list(csv.reader(io.StringIO(raw.decode("utf-8"))))
    assert rows[0][:3] == ["x", "V", "Vrat"] and rows[0][3] == "psi_-3"
    assert len(rows) == 12


def test_extend_eigensolve(capsys):
    code, out, _ = call(capsys, "extend", "--family", "rm1", "--A", "5/2", "--B", "1", "--m", "2",
                        "--K", "1", "--eigensolve", "--points", "2000")
    rows = json.loads(out)["eigensolve"]["rows"]
    assert max(r["abs_error"] for r in rows) < 1e-3


@pytest.mark.parametrize("argv", [
    ["extend", "--family", "scarf2", "--A", "3.5", "--B", "1", "--m", "3"],
    ["extend", "--family", "scarf2", "--A", "1", "--B", "1", "--m", "2"],
    ["spectrum", "--family", "morse", "--A", "2", "--B", "1"],
    ["poly", "--alpha", "x", "--beta", "1", "--nu", "1"],
    ["poly", "--alpha", "1", "--beta", "1"],
    ["ortho", "--alpha", "2", "--beta", "4", "--nu", "0", "--nu2", "1"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, _, err = call(capsys, *argv)
    assert code == 2 and err


def test_odd_m_message(capsys):
    _, _, err = call(capsys, "extend", "--family", "rm1", "--A", "3", "--B", "1", "--m", "1")
    assert "even" in err


def test_ortho_romanovski(capsys):
    code, out, _ = call(capsys, "ortho", "--alpha", "-2", "--beta", "-3", "--nu", "1", "--nu2", "3")
    assert code == 0 and json.loads(out)["relative"] < 1e-10


def test_ortho_extended(capsys):
    code, out, _ = call(capsys, "ortho", "--family", "rm1", "--A", "5/2", "--B", "1", "--m", "2",
                        "--nu", "0", "--nu2", "2")
    assert code == 0 and json.loads(out)["relative"] < 1e-8


def test_verify_passes(capsys):
    code, out, _ = call(capsys, "verify", "--output", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"] and len(data["checks"]) >= 15


def test_verify_tolerance_env(monkeypatch, capsys):
    monkeypatch.setenv("ROMEXT_TOL", "1e-6")
    _, out, _ = call(capsys, "verify", "--suite", "romanovski", "--output", "json")
    assert json.loads(out)["tolerance"] == 1e-6
    monkeypatch.setenv("ROMEXT_TOL", "-1")
    assert call(capsys, "verify", "--suite", "romanovski")[0] == 2


def test_verify_catches_mutation(monkeypatch, capsys):
    orig = romanovski.recurrence_coeffs

    def flipped(p, nu):
        c = orig(p, nu)
        return type(c)(c.a_nu, -c.b_nu, c.g_nu)

    monkeypatch.setattr(romanovski, "recurrence_coeffs", flipped)
    code, out, _ = call(capsys, "verify", "--suite", "romanovski")
    assert code == 1 and "FAIL" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "romext", "poly", "--alpha", "0", "--beta", "1", "--nu", "1"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["coefficients"] == ["0", "1"]
