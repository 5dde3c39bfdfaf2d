import csv
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from optomagnon.cli import run

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def invoke(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_entangle_json(tmp_path, capsys):
    code, out, _ = invoke(capsys, "entangle", "--config", CONFIGS / "entangle.toml", "--out", tmp_path)
    assert code == 0
    assert "stable=true" in out
    doc = json.loads((tmp_path / "entangle.json").read_text())
    assert doc["E_N"] > 0 and doc["stable"] is True
    assert len(doc["V"]) == 6 and len(doc["V"][0]) == 6


def test_entangle_csv(tmp_path, capsys):
    code, _, _ = invoke(capsys, "entangle", "--config", CONFIGS / "entangle.toml",
                        "--out", tmp_path, "--format", "csv")
    assert code == 0
    (row,) = read_csv(tmp_path / "entangle.csv")
    assert list(row) == ["E_N", "stable", "max_real_eig", "G_a_hz_re", "G_a_hz_im", "G_m_hz_re", "G_m_hz_im"]
    assert float(row["G_a_hz_re"]) == 4e6


def test_json_floats_round_trip(tmp_path, capsys):
    from optomagnon.entanglement import stationary_entanglement
    from optomagnon.model import reference_params

    invoke(capsys, "entangle", "--config", CONFIGS / "entangle.toml", "--out", tmp_path)
    doc = json.loads((tmp_path / "entangle.json").read_text())
    assert doc["E_N"] == stationary_entanglement(reference_params()).E_N


def test_transfer(tmp_path, capsys):
    code, out, _ = invoke(capsys, "transfer", "--config", CONFIGS / "transfer.toml", "--out", tmp_path,
                          "--set", "output.wigner_points=41")
    assert code == 0
    assert out.strip() == "F1=0.9471 S=0.9408 F_total=0.8895"
    (row,) = read_csv(tmp_path / "transfer.csv")
    assert float(row["F1"]) == pytest.approx(0.95, abs=0.01)
    assert float(row["S"]) == pytest.approx(0.94, abs=0.005)
    assert float(row["F_total"]) == pytest.approx(0.89, abs=0.01)
    assert row["weak_coupling"] == "true"
    cms = read_csv(tmp_path / "covariances.csv")
    assert [r["state"] for r in cms] == ["V_m0", "V_b", "V_out"]
    for name in ("magnon", "mechanical", "output"):
        rows = read_csv(tmp_path / f"wigner_{name}.csv")
        assert len(rows) == 41 * 41 and list(rows[0]) == ["q", "p", "W"]
        assert all(float(r["W"]) >= 0 for r in rows)


def test_transfer_json(tmp_path, capsys):
    code, _, _ = invoke(capsys, "transfer", "--config", CONFIGS / "transfer.toml", "--out", tmp_path,
                        "--format", "json", "--set", "output.wigner_points=21")
    assert code == 0
    doc = json.loads((tmp_path / "transfer.json").read_text())
    assert abs(doc["wigner"]["magnon"]["norm"] - 1) < 1e-2
    assert len(doc["wigner"]["output"]["W"]) == 21


def test_sweep_csv_and_threshold(tmp_path, capsys):
    code, out, _ = invoke(capsys, "sweep", "--config", CONFIGS / "temperature_sweep.toml", "--out", tmp_path,
                          "--set", "sweep.axis1.num=21")
    assert code == 0
    rows = read_csv(tmp_path / "sweep.csv")
    assert list(rows[0]) == ["T_kelvin", "E_N", "stable", "max_real_eig"]
    assert len(rows) == 21 and float(rows[-1]["T_kelvin"]) == 0.2
    (thr,) = read_csv(tmp_path / "threshold.csv")
    assert thr["parameter"] == "T_kelvin"
    assert float(thr["value"]) == pytest.approx(0.145, abs=0.01)
    assert "threshold_T_kelvin=" in out


def test_sweep_2d_row_major(tmp_path, capsys):
    args = ["sweep", "--config", CONFIGS / "detuning_sweep.toml", "--out", tmp_path,
            "--set", "sweep.axis1.num=3", "--set", "sweep.axis2.num=4"]
    assert invoke(capsys, *args)[0] == 0
    rows = read_csv(tmp_path / "sweep.csv")
    assert len(rows) == 12
    # axis2 varies fastest
    assert [float(r["Delta_a_hz"]) for r in rows[:4]] == pytest.approx([0, 80e6 / 3, 160e6 / 3, 80e6])
    assert all(float(r["Delta_m_hz"]) == -80e6 for r in rows[:4])


def test_sweep_threads_identical(tmp_path, capsys):
    base = ["sweep", "--config", CONFIGS / "detuning_sweep.toml", "--set", "sweep.axis1.num=9",
            "--set", "sweep.axis2.num=9"]
    invoke(capsys, *base, "--out", tmp_path / "a")
    invoke(capsys, *base, "--out", tmp_path / "b", "--threads", "4")
    assert (tmp_path / "a" / "sweep.csv").read_bytes() == (tmp_path / "b" / "sweep.csv").read_bytes()


def test_deterministic_output(tmp_path, capsys):
    for d in ("a", "b"):
        invoke(capsys, "transfer", "--config", CONFIGS / "transfer.toml", "--out", tmp_path / d,
               "--set", "output.wigner_points=11")
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_set_override_replaces_unit_spelling(tmp_path, capsys):
    code, out, _ = invoke(capsys, "entangle", "--config", CONFIGS / "entangle.toml", "--out", tmp_path,
                          "--set", "params.T=0.3")
    assert code == 0
    assert out.startswith("E_N=0 ")


def test_couplings(tmp_path, capsys):
    code, out, _ = invoke(capsys, "couplings", "--config", CONFIGS / "couplings.toml", "--out", tmp_path)
    assert code == 0
    assert "regime=dispersive" in out
    (row,) = read_csv(tmp_path / "couplings.csv")
    assert list(row) == ["g_disp", "g_lin_re", "g_lin_im", "g_pa_re", "g_pa_im", "regime"]
    assert math.isfinite(float(row["g_disp"]))


def test_empty_axis_is_config_error(tmp_path, capsys):
    code, _, err = invoke(capsys, "sweep", "--config", CONFIGS / "temperature_sweep.toml", "--out", tmp_path,
                          "--set", "sweep.axis1={name='T_kelvin', values=[]}")
    assert code == 2
    assert "sweep.axis1.values" in err


def test_unknown_key_named(tmp_path, capsys):
    code, _, err = invoke(capsys, "entangle", "--config", CONFIGS / "entangle.toml", "--out", tmp_path,
                          "--set", "params.kappa_c_hz=1e6")
    assert code == 2
    assert "params.kappa_c_hz" in err


def test_block_of_other_command(tmp_path, capsys):
    code, _, err = invoke(capsys, "entangle", "--config", CONFIGS / "entangle.toml", "--out", tmp_path,
                          "--set", "bath.r=1.0")
    assert code == 2 and "bath" in err


def test_missing_file(tmp_path, capsys):
    code, _, _ = invoke(capsys, "entangle", "--config", tmp_path / "nope.toml", "--out", tmp_path)
    assert code == 2


def test_bad_toml(tmp_path, capsys):
    (tmp_path / "bad.toml").write_text("[params\n")
    assert invoke(capsys, "entangle", "--config", tmp_path / "bad.toml", "--out", tmp_path)[0] == 2


def test_no_convergence_is_numerical_error(tmp_path, capsys):
    code, _, err = invoke(capsys, "entangle", "--config", CONFIGS / "entangle.toml", "--out", tmp_path,
                          "--set", "params.drive={P_L_watt=0.1, Omega_hz=0.0}",
                          "--set", "params.Delta_a_hz=20e6")
    assert code == 3
    assert "NoConvergence" in err


def test_transfer_needs_direct_couplings(tmp_path, capsys):
    code, _, _ = invoke(capsys, "transfer", "--config", CONFIGS / "transfer.toml", "--out", tmp_path,
                        "--set", "params.drive={P_L_watt=1e-3, Omega_hz=1e6}")
    assert code == 2


def test_console_script(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "optomagnon", "entangle", "--config",
                           str(CONFIGS / "entangle.toml"), "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("E_N=0.167308")
