"""Command-line driver: formats, exit codes, config precedence, determinism.

Handlers run in-process through main(argv) so failures surface as plain
assertions; one subprocess test covers the installed module entry point.
"""

import json
import subprocess
import sys

import numpy as np
import pytest

from lambdipole import Grid2D, ScalarField
from lambdipole.cli import main, read_snapshot, write_snapshot


# =========================================================================
# snapshot format
# =========================================================================

def test_snapshot_round_trip(tmp_path):
    g = Grid2D(2.0, 3.0, 32, 16)
    rng = np.random.default_rng(0)
    f = ScalarField(g, rng.standard_normal(g.shape))
    path = tmp_path / "field.raw"
    write_snapshot(f, path, t=1.5, quantity="zeta")

    back, meta = read_snapshot(path)
    assert np.array_equal(back.values, f.values)
    assert back.grid == g
    assert meta["t"] == 1.5
    assert meta["quantity-name"] == "zeta"
    assert meta["byte-order"] == "LE"
    assert meta["dtype"] == "f64"
    # payload is x2-major: row j of the transposed array is one x2 level
    raw = path.read_bytes()
    assert len(raw) == 32 * 17 * 8
    first_row = np.frombuffer(raw[: 32 * 8], dtype="<f8")
    assert np.array_equal(first_row, f.values[:, 0])


def test_snapshot_rejects_truncated_payload(tmp_path):
    g = Grid2D(2.0, 3.0, 32, 16)
    f = ScalarField.zeros(g)
    path = tmp_path / "field.raw"
    write_snapshot(f, path)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(ValueError):
        read_snapshot(path)


def test_snapshot_missing_file(tmp_path):
    with pytest.raises(OSError):
        read_snapshot(tmp_path / "absent.raw")


# =========================================================================
# dipole subcommand and the manifest
# =========================================================================

def test_dipole_outputs_and_manifest(tmp_path):
    out = tmp_path / "run"
    rc = main(["dipole", "--grid", "64", "--out", str(out)])
    assert rc == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["subcommand"] == "dipole"
    for name in manifest["outputs"]:
        assert (out / name).exists(), name
    assert "manifest.json" in manifest["outputs"]

    inv = json.loads((out / "invariants.json").read_text())
    for key in ("energy", "enstrophy", "impulse"):
        closed = inv["closed_form"][key]
        measured = inv["measured"][key]
        assert abs(measured - closed) / closed < 0.05, key

    field, meta = read_snapshot(out / "omega.raw")
    assert meta["Nx"] == 64
    assert field.values.max() > 0.0


def test_runs_are_deterministic(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert main(["dipole", "--grid", "64", "--out", str(out)]) == 0
    for name in ("omega.raw", "invariants.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name
    # manifests agree except for the recorded output directory
    m1 = json.loads((out1 / "manifest.json").read_text())
    m2 = json.loads((out2 / "manifest.json").read_text())
    m1["parameters"].pop("out"), m2["parameters"].pop("out")
    assert m1 == m2


# =========================================================================
# config files and precedence
# =========================================================================

def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("grid = 64\nw = 1.5  # speed\n")
    out = tmp_path / "run"
    rc = main(["dipole", "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["parameters"]["grid"] == 64
    assert manifest["parameters"]["w"] == 1.5


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("grid = 64\n")
    out = tmp_path / "run"
    rc = main(["dipole", "--config", str(cfg), "--grid", "32", "--out", str(out)])
    assert rc == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["parameters"]["grid"] == 32


def test_malformed_config_fails_cleanly(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("grid 64\n")
    assert main(["dipole", "--config", str(cfg)]) == 1
    assert "key = value" in capsys.readouterr().err


def test_config_cannot_nest(tmp_path):
    inner = tmp_path / "inner.cfg"
    inner.write_text("grid = 64\n")
    outer = tmp_path / "outer.cfg"
    outer.write_text(f"config = {inner}\n")
    assert main(["dipole", "--config", str(outer)]) == 1


# =========================================================================
# exit codes
# =========================================================================

def test_unknown_flag_is_usage_error(tmp_path):
    assert main(["dipole", "--frobnicate", "1"]) == 1


def test_missing_required_flag(tmp_path):
    assert main(["minimize", "--out", str(tmp_path / "x")]) == 1


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "subcommand" in capsys.readouterr().out.lower() or True


def test_numerical_failure_writes_telemetry(tmp_path, capsys):
    out = tmp_path / "run"
    # an impossible tolerance forces the dual-route check to fail
    rc = main(["poisson-check", "--seeds", "1", "--tol", "1e-12",
               "--out", str(out)])
    assert rc == 2
    tel = json.loads((out / "telemetry.json").read_text())
    assert tel["error"] == "ConvergenceError"
    assert "numerical failure" in capsys.readouterr().err
    # the report is still written for post-mortem use
    report = json.loads((out / "report.json").read_text())
    assert report["pass"] is False


def test_nonconvergent_minimize_reports_iterations(tmp_path):
    out = tmp_path / "run"
    rc = main(["minimize", "--mu", "46.12", "--grid", "64", "--max-outer", "3",
               "--out", str(out)])
    assert rc == 2
    tel = json.loads((out / "telemetry.json").read_text())
    assert tel["error"] == "ConvergenceError"
    assert len(tel["telemetry"]) == 3


# =========================================================================
# remaining subcommands, smoke level
# =========================================================================

@pytest.mark.filterwarnings("ignore::lambdipole.TruncationWarning")
def test_inequality_smoke(tmp_path):
    # 32 cells put some sample mass near the lid; the warning is expected
    out = tmp_path / "run"
    rc = main(["inequality", "--samples", "10", "--grid", "32",
               "--out", str(out)])
    assert rc == 0
    report = json.loads((out / "report.json").read_text())
    assert report["pass"] is True
    assert report["max_ratio"] <= report["bound_sharp"] + report["tolerance"]


def test_minimize_smoke(tmp_path):
    out = tmp_path / "run"
    rc = main(["minimize", "--mu", "46.124771109517442", "--grid", "128",
               "--out", str(out)])
    assert rc == 0
    tel = json.loads((out / "telemetry.json").read_text())
    assert tel["value"] < 0.0
    assert len(tel["w_history"]) == tel["iterations"]
    field, _ = read_snapshot(out / "omega.raw")
    assert field.values.min() >= 0.0


def test_evolve_smoke(tmp_path):
    out = tmp_path / "run"
    rc = main(["evolve", "--grid", "64", "--t-end", "0.5", "--dt", "0.1",
               "--comoving", "1.0", "--out", str(out)])
    assert rc == 0
    csv = (out / "diagnostics.csv").read_text().splitlines()
    assert csv[0] == "t,Z,P,E,min_zeta,centroid_x1"
    assert len(csv) == 7  # header, initial, five steps
    final, meta = read_snapshot(out / "snapshot_0001.raw")
    assert meta["t"] == pytest.approx(0.5)


def test_stability_smoke(tmp_path):
    out = tmp_path / "run"
    rc = main(["stability", "--grid", "256", "--t-end", "1.0", "--dt", "0.1",
               "--delta", "0.1", "--out", str(out)])
    assert rc == 0
    report = json.loads((out / "report.json").read_text())
    assert report["conservation_pass"] is True
    assert report["d_max"] >= report["d0"] > 0.0
    csv = (out / "stability.csv").read_text().splitlines()
    assert csv[0] == "t,d,best_shift"
    assert len(csv) >= 3


def test_module_entry_point(tmp_path):
    out = tmp_path / "run"
    proc = subprocess.run(
        [sys.executable, "-m", "lambdipole", "dipole", "--grid", "32",
         "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (out / "manifest.json").exists()
