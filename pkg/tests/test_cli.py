"""End-to-end tests of the mixbench command line."""

import json
import subprocess
import sys

import pytest

SMOKE_CONFIG = {
    "estimator": "dense_pca",
    "n": 200,
    "d": 4,
    "lambda": 2.0,
    "sigma": 1.0,
    "replicates": 3,
    "master_seed": 42,
}


def run_cli(*args, **kwargs):
    return subprocess.run(
        [sys.executable, "-m", "mixbench", *args],
        capture_output=True,
        text=True,
        **kwargs,
    )


def write_config(tmp_path, obj, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return path


class TestBoundsCommand:
    def test_value_matches_library(self):
        from mixbench.bounds import theorem_bound

        proc = run_cli("bounds", "--kind", "thm1_upper", "--n", "10000", "--d", "10", "--lambda", "1.0")
        assert proc.returncode == 0
        obj = json.loads(proc.stdout)
        assert obj["bound_value"] == theorem_bound("thm1_upper", n=10000, d=10, lam=1.0, sigma=1.0)
        assert obj["vacuous"] is True

    def test_hypothesis_violation_reports_error(self):
        proc = run_cli("bounds", "--kind", "thm2_lower", "--n", "10000", "--d", "5", "--lambda", "0.2")
        assert proc.returncode == 2
        assert "d >= 9" in proc.stderr


class TestPackingCommand:
    def test_writes_family_and_verify_reads_it(self, tmp_path):
        out = tmp_path / "family.json"
        proc = run_cli(
            "packing", "--regime", "dense", "--n", "10000", "--d", "9", "--lambda", "0.2",
            "--sigma", "1.0", "--seed", "0", "--out", str(out),
        )
        assert proc.returncode == 0, proc.stderr
        obj = json.loads(out.read_text())
        assert obj["regime"] == "dense"
        assert len(obj["thetas"]) == len(obj["codewords"])
        check = run_cli("verify", "--suite", "fano", "--family", str(out))
        assert check.returncode == 0, check.stdout + check.stderr
        entries = json.loads(check.stdout)
        assert len(entries) == 1 and entries[0]["holds"]

    def test_sparse_needs_s(self, tmp_path):
        out = tmp_path / "family.json"
        proc = run_cli(
            "packing", "--regime", "sparse", "--n", "10000", "--d", "17", "--lambda", "0.2",
            "--out", str(out),
        )
        assert proc.returncode == 2


class TestSimulateCommand:
    def test_csv_output_deterministic(self, tmp_path):
        cfg = write_config(tmp_path, SMOKE_CONFIG)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli("simulate", "--config", str(cfg), "--out", str(out1)).returncode == 0
        assert run_cli("simulate", "--config", str(cfg), "--out", str(out2)).returncode == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_serial_parallel_identical(self, tmp_path):
        cfg = write_config(tmp_path, {**SMOKE_CONFIG, "replicates": 6})
        out1, out2 = tmp_path / "s.csv", tmp_path / "p.csv"
        assert run_cli("simulate", "--config", str(cfg), "--out", str(out1), "--threads", "1").returncode == 0
        assert run_cli("simulate", "--config", str(cfg), "--out", str(out2), "--threads", "4").returncode == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_bad_config_exit_code(self, tmp_path):
        cfg = write_config(tmp_path, {**SMOKE_CONFIG, "mystery": 1})
        proc = run_cli("simulate", "--config", str(cfg), "--out", str(tmp_path / "x.csv"))
        assert proc.returncode == 2
        assert "mystery" in proc.stderr

    def test_json_output(self, tmp_path):
        cfg = write_config(tmp_path, SMOKE_CONFIG)
        out = tmp_path / "a.json"
        assert run_cli("simulate", "--config", str(cfg), "--out", str(out)).returncode == 0
        obj = json.loads(out.read_text())
        assert len(obj["rows"]) == 3


class TestRatesCommand:
    def test_slope_report(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {**SMOKE_CONFIG, "n": 400, "replicates": 5, "sweep": {"axis": "n", "values": [400, 800, 1600]}},
        )
        proc = run_cli("rates", "--axis", "n", "--config", str(cfg))
        assert proc.returncode == 0, proc.stderr
        obj = json.loads(proc.stdout)
        assert obj["axis"] == "n"
        assert len(obj["mean_losses"]) == 3
        assert obj["fitted_slope"] is not None

    def test_axis_mismatch(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {**SMOKE_CONFIG, "sweep": {"axis": "n", "values": [100, 200]}},
        )
        proc = run_cli("rates", "--axis", "d", "--config", str(cfg))
        assert proc.returncode == 2


class TestVerifyCommand:
    def test_loss_sandwich_suite(self):
        proc = run_cli("verify", "--suite", "loss-sandwich")
        assert proc.returncode == 0, proc.stdout + proc.stderr
        entries = json.loads(proc.stdout)
        assert len(entries) == 20
        assert all(e["holds"] for e in entries)

    def test_fano_suite_default(self):
        proc = run_cli("verify", "--suite", "fano")
        assert proc.returncode == 0, proc.stdout + proc.stderr
        entries = json.loads(proc.stdout)
        assert {e["regime"] for e in entries} == {"dense", "sparse"}

    def test_triangle_suite(self):
        proc = run_cli("verify", "--suite", "triangle")
        assert proc.returncode == 0, proc.stdout + proc.stderr

    def test_output_file(self, tmp_path):
        out = tmp_path / "sandwich.json"
        proc = run_cli("verify", "--suite", "loss-sandwich", "--out", str(out))
        assert proc.returncode == 0
        assert len(json.loads(out.read_text())) == 20
