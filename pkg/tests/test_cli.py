import csv
import json

import pytest
from conftest import run_cli

from hyperell.cli import RunConfig, rows_to_csv


# --- lpoly -------------------------------------------------------------------


def test_lpoly_known_modulus():
    proc = run_cli("lpoly", "--q", "3", "--D", "x^3+2x+1")
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    assert payload["c"] == [1, 3, 3]
    assert payload["fe_symmetry"] == "exact"
    assert len(payload["theta"]) == 2
    assert payload["theta"][0] == pytest.approx(5 / 12, abs=1e-9)
    assert payload["rh_radius_err"] < 1e-9


def test_lpoly_rejects_even_degree():
    proc = run_cli("lpoly", "--q", "3", "--D", "x^2")
    assert proc.returncode == 2
    assert "odd" in proc.stderr or "squarefree" in proc.stderr


def test_lpoly_rejects_bad_inputs():
    assert run_cli("lpoly", "--q", "4", "--D", "x^3+x").returncode == 2
    assert run_cli("lpoly", "--q", "3", "--D", "x^3").returncode == 2  # not squarefree
    assert run_cli("lpoly", "--q", "3", "--D", "2x^3+1").returncode == 2  # not monic
    assert run_cli("lpoly", "--q", "3", "--D", "zebra").returncode == 2


# --- scan ---------------------------------------------------------------------


def test_scan_row_count_and_exit_zero(tmp_path):
    out = tmp_path / "scan.csv"
    proc = run_cli(
        "scan",
        "--q", "3", "--d", "5",
        "--target", "s:0",
        "--sample", "random:10",
        "--seed", "9",
        "--grid", "1024",
        "--out", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 10
    for row in rows:
        assert float(row["empirical_max"]) <= float(row["rigorous_bound"]) + 1e-9
    manifest = json.loads((tmp_path / "scan.manifest.json").read_text())
    assert manifest["seed"] == 9 and manifest["rows"] == 10
    assert manifest["violations"] == []
    assert "git_describe" in manifest and "tolerances" in manifest


def test_scan_deterministic_bytes(tmp_path):
    outs = []
    for name, threads in (("a.csv", "1"), ("b.csv", "8"), ("c.csv", "1")):
        out = tmp_path / name
        proc = run_cli(
            "scan",
            "--q", "3", "--d", "5",
            "--target", "s:0", "--target", "logmod",
            "--sample", "random:12",
            "--seed", "4",
            "--grid", "1024",
            "--out", str(out),
            env_extra={"HYPERELL_THREADS": threads},
        )
        assert proc.returncode == 0, proc.stderr
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_scan_rows_sorted_by_modulus(tmp_path):
    out = tmp_path / "scan.csv"
    proc = run_cli(
        "scan",
        "--q", "3", "--d", "5",
        "--target", "s:0",
        "--sample", "random:8",
        "--seed", "2",
        "--grid", "1024",
        "--out", str(out),
    )
    assert proc.returncode == 0
    rows = list(csv.DictReader(out.open()))
    from hyperell.fqpoly import FieldSpec, parse_poly

    encs = [parse_poly(r["D"], FieldSpec(3)).monic_index() for r in rows]
    assert encs == sorted(encs)


def test_scan_config_file(tmp_path):
    cfg = RunConfig(
        q=3, d=5, targets=("s:0",), sample="random:6", seed=13, grid=1024,
        out=str(tmp_path / "from_config.csv"),
    )
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text(cfg.to_text())
    proc = run_cli("scan", "--config", str(cfg_path))
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "from_config.csv").exists()
    rows = list(csv.DictReader((tmp_path / "from_config.csv").open()))
    assert len(rows) == 6


def test_scan_rejects_even_degree():
    proc = run_cli("scan", "--q", "3", "--d", "4", "--sample", "random:2")
    assert proc.returncode == 2


def test_runconfig_roundtrip():
    cfg = RunConfig(q=5, d=7, targets=("logmod", "s:1"), sample="random:50", seed=99,
                    degree_policy="fixed:3", mode="exact", grid=2048, out="x.csv",
                    slack=2e-9)
    assert RunConfig.from_text(cfg.to_text()) == cfg
    with pytest.raises(ValueError):
        RunConfig.from_text("unknown_key=1\n")
    with pytest.raises(ValueError):
        RunConfig.from_text("q 3\n")


# --- extremal -----------------------------------------------------------------


def test_extremal_log2sin(tmp_path):
    out = tmp_path / "coef.csv"
    proc = run_cli(
        "extremal", "--target", "log2sin", "--side", "majorant", "--N", "8",
        "--out", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    cert = json.loads(proc.stdout)
    assert cert["relative_gap"] <= 0.005
    assert cert["coefficient_check"]["classical_bounds_ok"] is True
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 9
    assert float(rows[0]["cos"]) == pytest.approx(cert["achieved_mean"])


def test_extremal_bernoulli_minorant():
    # order 1 bounds the index-2 Bernoulli function: oracle m_2/(N+1)^2
    proc = run_cli("extremal", "--target", "bernoulli:1", "--side", "minorant", "--N", "8")
    assert proc.returncode == 0, proc.stderr
    cert = json.loads(proc.stdout)
    assert cert["oracle_mean"] == pytest.approx(-1.0 / (12 * 81), rel=1e-9)
    assert cert["relative_gap"] <= 0.005
    assert cert["target"] == "bernoulli:1"


def test_extremal_interval():
    proc = run_cli("extremal", "--target", "interval:0.2:0.7", "--side", "majorant", "--N", "4")
    assert proc.returncode == 0, proc.stderr
    cert = json.loads(proc.stdout)
    assert cert["gap"] == pytest.approx(0.2, rel=0.005)


def test_extremal_rejects_garbage_target():
    assert run_cli("extremal", "--target", "wiggle", "--side", "majorant", "--N", "4").returncode == 2


# --- constants ------------------------------------------------------------------


def test_constants_table():
    proc = run_cli("constants", "--nmax", "5")
    assert proc.returncode == 0
    rows = list(csv.DictReader(proc.stdout.splitlines()))
    assert len(rows) == 5
    byn = {int(r["n"]): r for r in rows}
    assert byn[1]["flag"] == "exact match"
    assert byn[2]["flag"] == "A < C"
    assert byn[3]["flag"] == "exact match"
    # Lehmer bracket for the even orders
    import math

    for n in (2, 4):
        a = float(byn[n]["A_minus"])
        assert (1 - 3.0**-n) / (math.pi * 2 ** (n + 1)) < a < 1 / (math.pi * 2 ** (n + 1))
    assert run_cli("constants", "--nmax", "13").returncode == 2


# --- csv formatting ---------------------------------------------------------------


def test_rows_to_csv_header_matches_degree():
    rows = [
        {
            "q": 3, "d": 5, "D": "x^5+x", "c": [1, 0, 0, 0, 9],
            "target": "logmod", "n": None, "N_used": 1, "mode": "weil",
            "main_term": 1.0, "tail_term": 0.5, "rigorous_bound": 1.5,
            "empirical_max": 1.2, "argmax": 0.125, "ratio": 0.8,
        }
    ]
    text = rows_to_csv(rows, 5)
    header = text.splitlines()[0].split(",")
    assert header[3:8] == ["c_0", "c_1", "c_2", "c_3", "c_4"]
    assert header[9] == "n"
