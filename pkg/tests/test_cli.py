"""Command-line interface: analyze, simulate, verify."""

import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from designbench.cli import main

DATA = Path(__file__).parent / "data"
FIXTURE = DATA / "star_like.csv"
GOLDEN = DATA / "analyze_golden.csv"


def run_cli(*args):
    return main(list(args))


class TestAnalyze:
    def test_two_column_diff_in_means(self, tmp_path, capsys):
        path = tmp_path / "tiny.csv"
        path.write_text("y,w\n3,1\n5,1\n1,0\n1,0\n")
        code = run_cli(
            "analyze",
            "--input", str(path),
            "--outcome", "y",
            "--treatment", "w",
            "--estimators", "dif",
            "--se", "hc0",
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["estimates"]["dif"] == pytest.approx(3.0)

    def test_exact_linear_outcomes(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        n = 40
        x = rng.normal(size=n)
        w = np.zeros(n, dtype=int)
        w[rng.choice(n, 16, replace=False)] = 1
        y = 2.0 * x + 1.5 * w  # exactly linear, effect 1.5
        frame = pd.DataFrame({"y": y, "w": w, "x": x})
        path = tmp_path / "linear.csv"
        frame.to_csv(path, index=False)
        code = run_cli(
            "analyze",
            "--input", str(path),
            "--outcome", "y",
            "--treatment", "w",
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["estimates"]["adj"] == pytest.approx(1.5, abs=1e-9)
        assert payload["estimates"]["cf"] == pytest.approx(1.5, abs=1e-9)

    def test_golden_csv_layout(self, capsys):
        code = run_cli(
            "analyze",
            "--input", str(FIXTURE),
            "--outcome", "gpa",
            "--treatment", "treated",
            "--covariates", "female,age,hsgpa",
            "--estimators", "dif,adj,cf",
            "--se", "hc0,hc3",
            "--format", "csv",
        )
        assert code == 0
        out = capsys.readouterr().out
        assert out == GOLDEN.read_text(encoding="utf-8")

    def test_full_fixture_table(self, capsys):
        code = run_cli(
            "analyze",
            "--input", str(FIXTURE),
            "--outcome", "gpa",
            "--treatment", "treated",
        )
        assert code == 0
        out = capsys.readouterr().out
        for name in ("dif", "adj", "bc", "cf", "unbiased"):
            assert name in out
        for name in ("hc0", "hc2", "hc3", "dbhc3"):
            assert name in out
        assert "confidence intervals" in out

    def test_stratified_path(self, tmp_path, capsys):
        rng = np.random.default_rng(1)
        n = 80
        stratum = np.repeat(["a", "b"], n // 2)
        w = np.concatenate(
            [rng.permutation([1] * 15 + [0] * 25), rng.permutation([1] * 20 + [0] * 20)]
        )
        x = rng.normal(size=n)
        y = x + 0.5 * w + rng.normal(size=n)
        frame = pd.DataFrame({"y": y, "w": w, "x": x, "block": stratum})
        path = tmp_path / "strat.csv"
        frame.to_csv(path, index=False)
        code = run_cli(
            "analyze",
            "--input", str(path),
            "--outcome", "y",
            "--treatment", "w",
            "--covariates", "x",
            "--stratum", "block",
            "--estimators", "cf",
            "--se", "hc3,dbhc3",
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["stratified"] is True
        assert "cf" in payload["estimates"]
        assert set(payload["standard_errors"]) == {"hc3", "dbhc3"}

    def test_missing_column_is_data_error(self, tmp_path, capsys):
        path = tmp_path / "tiny.csv"
        path.write_text("y,w\n1,1\n0,0\n")
        assert run_cli(
            "analyze", "--input", str(path), "--outcome", "nope", "--treatment", "w"
        ) == 3

    def test_missing_values_rejected(self, tmp_path):
        path = tmp_path / "gap.csv"
        path.write_text("y,w,x\n1,1,0.5\n,0,0.1\n2,1,0.2\n0,0,0.3\n")
        assert run_cli(
            "analyze", "--input", str(path), "--outcome", "y", "--treatment", "w"
        ) == 3

    def test_nonbinary_treatment_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("y,w\n1,1\n0,2\n2,0\n1,0\n")
        assert run_cli(
            "analyze", "--input", str(path), "--outcome", "y", "--treatment", "w"
        ) == 3

    def test_too_many_covariates_is_numeric_error(self, tmp_path, capsys):
        rng = np.random.default_rng(2)
        n = 8
        frame = pd.DataFrame(rng.normal(size=(n, 10)), columns=[f"c{i}" for i in range(10)])
        frame["w"] = [1, 1, 1, 1, 0, 0, 0, 0]
        frame["y"] = rng.normal(size=n)
        path = tmp_path / "wide.csv"
        frame.to_csv(path, index=False)
        code = run_cli(
            "analyze",
            "--input", str(path),
            "--outcome", "y",
            "--treatment", "w",
            "--estimators", "adj,cf",
        )
        err = capsys.readouterr().err
        assert code == 4
        assert "reduce covariates or drop estimator" in err


class TestSimulate:
    def test_missing_required_key_names_it(self, tmp_path, capsys):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("pi1=0.25\np_grid=2,4\ndf=3\nerror_kind=worst\nreps=5\nseed=1\n")
        assert run_cli("simulate", "--config", str(cfg)) == 2
        assert "'n'" in capsys.readouterr().err

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("n=60\nbogus=1\n")
        assert run_cli("simulate", "--config", str(cfg)) == 2
        assert "bogus" in capsys.readouterr().err

    def test_tiny_campaign_under_ten_seconds(self, tmp_path, capsys):
        cfg = tmp_path / "c.cfg"
        cfg.write_text(
            "n=60\npi1=0.25\np_grid={2,4}\ndf=3\nerror_kind=worst\nreps=50\nseed=5\n"
            "estimators=dif,adj,cf\nse_methods=hc3\n"
        )
        out_dir = tmp_path / "out"
        start = time.monotonic()
        code = run_cli("simulate", "--config", str(cfg), "--out", str(out_dir))
        elapsed = time.monotonic() - start
        assert code == 0
        assert elapsed < 10.0
        assert (out_dir / "simresult_t3_worst.csv").exists()
        assert (out_dir / "simresult_t3_worst.json").exists()

    def test_rerun_byte_identical(self, tmp_path, capsys):
        cfg = tmp_path / "c.cfg"
        cfg.write_text(
            "n=60\npi1=0.25\np_grid=2\ndf=4\nerror_kind=normal\nreps=20\nseed=9\n"
            "estimators=dif\nse_methods=hc0\n"
        )
        outs = []
        for sub in ("a", "b"):
            out_dir = tmp_path / sub
            assert run_cli("simulate", "--config", str(cfg), "--out", str(out_dir)) == 0
            outs.append((out_dir / "simresult_t4_normal.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_flags_override_config(self, tmp_path, capsys):
        cfg = tmp_path / "c.cfg"
        cfg.write_text(
            "n=60\npi1=0.25\np_grid=2\ndf=3\nerror_kind=worst\nreps=10\nseed=5\n"
            "estimators=dif\nse_methods=\n"
        )
        out_dir = tmp_path / "out"
        code = run_cli(
            "simulate",
            "--config", str(cfg),
            "--out", str(out_dir),
            "--error-kind", "normal",
            "--reps", "4",
        )
        assert code == 0
        payload = json.loads((out_dir / "simresult_t3_normal.json").read_text())
        assert payload["config"]["error_kind"] == "normal"
        assert payload["config"]["reps"] == 4


class TestVerify:
    def test_moments_suite(self, capsys):
        assert run_cli("verify", "moments") == 0
        out = capsys.readouterr().out
        assert "moments (n=6, n1=3)" in out

    def test_unbiasedness_suite(self, capsys):
        assert run_cli("verify", "unbiasedness") == 0

    def test_all_suites_exit_zero(self, capsys):
        assert run_cli("verify", "all") == 0
        assert "FAIL" not in capsys.readouterr().out


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "designbench.cli", "verify", "projections"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "projection identities" in proc.stdout

    def test_usage_error_exit_code(self):
        proc = subprocess.run(
            [sys.executable, "-m", "designbench.cli", "analyze"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2
