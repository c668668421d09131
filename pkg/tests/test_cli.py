"""CLI subcommands: artifacts, exit codes, reproducibility."""

import json

import numpy as np
import pytest

from conemoser import fixtures, rearrange
from conemoser.cli import main


def run(argv):
    return main(argv)


def test_constants_writes_report(tmp_path):
    code = run([
        "constants", "--weight", "x1", "--out", str(tmp_path), "--label", "c",
        "--budget", "100000",
    ])
    assert code == 0
    obj = json.loads((tmp_path / "constants-c.json").read_text())
    assert obj["C_D"] == pytest.approx(2.0 / 3.0, rel=1e-9)
    assert obj["C_D_quadrature"] == pytest.approx(2.0 / 3.0, rel=1e-3)


def test_constants_from_explicit_flags(tmp_path):
    code = run([
        "constants", "--d", "2", "--active", "1", "2", "--exponents", "1", "1",
        "--out", str(tmp_path), "--label", "q", "--budget", "100000",
    ])
    assert code == 0
    obj = json.loads((tmp_path / "constants-q.json").read_text())
    assert obj["C_D"] == pytest.approx(1.0 / 8.0, rel=1e-9)


def test_constants_rejects_negative_exponent(tmp_path, capsys):
    code = run([
        "constants", "--d", "2", "--active", "1", "--exponents", "-1",
        "--out", str(tmp_path),
    ])
    assert code == 2
    assert "exponents must be positive" in capsys.readouterr().err


def test_rearrange_fixture(tmp_path):
    code = run([
        "rearrange", "--weight", "x1", "--fixture", "shifted-bump",
        "--grid-nodes", "64", "--out", str(tmp_path), "--label", "r",
    ])
    assert code == 0
    obj = json.loads((tmp_path / "rearrange-r.json").read_text())
    assert obj["equimeasurability_discrepancy"] <= 2e-2
    assert all(v["holds"] for v in obj["polya_szego"].values())
    profile = rearrange.load_profile(str(tmp_path / "rearrange-r-profile.csv"))
    assert np.all(np.diff(profile.values) <= 0)


def test_rearrange_rejects_zero_input(tmp_path, capsys):
    f = rearrange.GridFunction(lo=(0.0, -1.0), hi=(1.0, 1.0), values=np.zeros((8, 8)))
    rearrange.save_grid(f, str(tmp_path / "zero"))
    code = run([
        "rearrange", "--weight", "x1", "--input", str(tmp_path / "zero"),
        "--out", str(tmp_path),
    ])
    assert code == 2
    assert "zero function" in capsys.readouterr().err


def test_rearrange_rejects_malformed_input(tmp_path, capsys):
    (tmp_path / "bad.json").write_text("{not json")
    code = run([
        "rearrange", "--weight", "x1", "--input", str(tmp_path / "bad"),
        "--out", str(tmp_path),
    ])
    assert code == 2


def test_reduce_reports_residuals(tmp_path):
    code = run([
        "reduce", "--weight", "x1", "--fixture", "radial-bump",
        "--grid-nodes", "64", "--N", "1024", "--beta", "0.5",
        "--out", str(tmp_path), "--label", "d",
    ])
    assert code == 0
    obj = json.loads((tmp_path / "reduce-d.json").read_text())
    assert obj["energy_residual"] <= 1e-3
    assert obj["exp_residual"] <= 1e-3


def test_reduce_rejects_bad_beta(tmp_path, capsys):
    code = run([
        "reduce", "--weight", "x1", "--fixture", "tent", "--beta", "1.5",
        "--out", str(tmp_path),
    ])
    assert code == 2
    assert "beta" in capsys.readouterr().err


def test_optimize_report_and_exit_code(tmp_path):
    code = run([
        "optimize", "--q", "2", "--N", "128", "--out", str(tmp_path), "--label", "o",
    ])
    assert code == 0
    obj = json.loads((tmp_path / "optimize-o.json").read_text())
    assert obj["converged"]
    assert abs(obj["constraint"] - 1.0) <= 1e-9
    assert obj["value"] > obj["baseline_value"]


def test_optimize_rejects_bad_q(tmp_path, capsys):
    code = run(["optimize", "--q", "1", "--out", str(tmp_path)])
    assert code == 2
    assert "q must exceed 1" in capsys.readouterr().err


def test_optimize_schedule(tmp_path):
    code = run([
        "optimize", "--q", "2", "--schedule", "64,128", "--out", str(tmp_path),
        "--label", "s",
    ])
    assert code == 0
    obj = json.loads((tmp_path / "optimize-s.json").read_text())
    assert "A_estimate" in obj and len(obj["history"]) == 2


def test_repeated_runs_are_byte_identical(tmp_path):
    for label in ("a", "b"):
        run([
            "optimize", "--q", "2", "--N", "128", "--out", str(tmp_path),
            "--label", label,
        ])
    assert (tmp_path / "optimize-a.json").read_text().replace("-a", "-x") == \
        (tmp_path / "optimize-b.json").read_text().replace("-b", "-x")


def test_verify_pipeline(tmp_path):
    code = run([
        "verify", "--weight", "x1", "--fixture", "radial-bump",
        "--grid-nodes", "64", "--N", "256", "--out", str(tmp_path), "--label", "v",
    ])
    assert code == 0
    obj = json.loads((tmp_path / "verify-v.json").read_text())
    # N = 256 here to keep the test fast; the 1e-3 figure needs N = 2048
    assert obj["reduction"]["energy_residual"] <= 5e-3
    assert obj["extremal"]["relative_gap"] <= 1e-2
    assert 0.98 <= obj["extremal"]["gradient_norm"] <= 1.02
