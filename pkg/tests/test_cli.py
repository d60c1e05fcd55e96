"""Command-line workflows: exit codes, outputs, reproducibility."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from splitfinder.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def dj_instance(tmp_path, capsys):
    path = tmp_path / "dj.instance.json"
    code, out, _ = run_cli(
        capsys, "gen", "--family", "disjunction",
        "--param", "d=4", "--param", "m=2", "--out", str(path),
    )
    assert code == 0
    return path, out


class TestGen:
    def test_prints_counts_and_digest(self, dj_instance):
        _, out = dj_instance
        assert "n=10" in out
        assert "m_tests=16" in out
        assert "digest=" in out

    def test_polygon_and_box_examples(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "gen", "--family", "convex_polygon",
            "--param", "m=5", "--param", "balanced=false",
            "--out", str(tmp_path / "p.instance.json"),
        )
        assert code == 0 and "n=20" in out
        code, out, _ = run_cli(
            capsys, "gen", "--family", "box_localization",
            "--param", "r=1,2", "--out", str(tmp_path / "b.instance.json"),
        )
        assert code == 0 and "n=15" in out

    def test_bad_params_exit_2(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "gen", "--family", "disjunction",
            "--param", "d=3", "--param", "m=9",
            "--out", str(tmp_path / "x.json"),
        )
        assert code == 2
        assert err.startswith("ERROR ")
        assert "\n" == err[err.index("\n") :]  # single line

    def test_empty_family_exit_2(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "gen", "--family", "discrete_linear",
            "--param", "d=1", "--param", "r=1",
            "--out", str(tmp_path / "x.json"),
        )
        assert code == 2
        assert "ERROR EmptyFamily" in err

    def test_reruns_are_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            run_cli(capsys, "gen", "--family", "monotone_cnf",
                    "--param", "d=4", "--param", "m=1", "--param", "l=2",
                    "--out", str(path))
        assert a.read_bytes() == b.read_bytes()


class TestAnalyzeRunVerify:
    def test_full_workflow(self, dj_instance, tmp_path, capsys):
        instance_path, _ = dj_instance
        report_path = tmp_path / "dj.report.json"
        code, out, _ = run_cli(
            capsys, "analyze", "--in", str(instance_path),
            "--edges", "l1", "--out", str(report_path),
        )
        assert code == 0
        assert "coherence=1/2" in out
        assert "alpha_star=1/3" in out

        code, out, _ = run_cli(capsys, "run", "--in", str(instance_path), "--oracle", "all")
        assert code == 0
        assert "worst_case=" in out and "average=" in out

        code, out, _ = run_cli(
            capsys, "verify", "--in", str(instance_path), "--report", str(report_path)
        )
        assert code == 0
        assert "PASS worst_case<=split_worst" in out
        assert "FAIL" not in out

    def test_analyze_reruns_byte_identical(self, dj_instance, tmp_path, capsys):
        instance_path, _ = dj_instance
        r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
        for path in (r1, r2):
            assert run_cli(capsys, "analyze", "--in", str(instance_path),
                           "--out", str(path))[0] == 0
        assert r1.read_bytes() == r2.read_bytes()

    def test_analyze_limit_zero_diagnostic(self, dj_instance, capsys):
        instance_path, _ = dj_instance
        code, out, _ = run_cli(
            capsys, "analyze", "--in", str(instance_path), "--limit", "0",
            "--samples", "20",
        )
        assert code == 0
        assert "alpha_star=0/1 (unverified_edges_dominate)" in out
        assert "split_worst=unbounded" in out

    def test_run_single_oracle_writes_transcript(self, dj_instance, tmp_path, capsys):
        instance_path, _ = dj_instance
        out_path = tmp_path / "one.transcript.json"
        code, out, _ = run_cli(
            capsys, "run", "--in", str(instance_path),
            "--oracle", "x1", "--out", str(out_path),
        )
        assert code == 0
        assert "identified=x1" in out
        doc = json.loads(out_path.read_text())
        assert doc["kind"] == "transcript"
        assert doc["identified"] == "x1"

    def test_run_unknown_oracle_exit_2(self, dj_instance, capsys):
        instance_path, _ = dj_instance
        code, _, err = run_cli(
            capsys, "run", "--in", str(instance_path), "--oracle", "nope"
        )
        assert code == 2 and "ERROR" in err

    def test_verify_mismatched_instance_exit_2(self, dj_instance, tmp_path, capsys):
        instance_path, _ = dj_instance
        report_path = tmp_path / "dj.report.json"
        run_cli(capsys, "analyze", "--in", str(instance_path), "--out", str(report_path))
        other = tmp_path / "other.instance.json"
        run_cli(capsys, "gen", "--family", "disjunction",
                "--param", "d=3", "--param", "m=1", "--out", str(other))
        code, _, err = run_cli(
            capsys, "verify", "--in", str(other), "--report", str(report_path)
        )
        assert code == 2
        assert "digest mismatch" in err

    def test_verify_doctored_bounds_exit_1(self, dj_instance, tmp_path, capsys):
        instance_path, _ = dj_instance
        report_path = tmp_path / "dj.report.json"
        run_cli(capsys, "analyze", "--in", str(instance_path), "--out", str(report_path))
        doc = json.loads(report_path.read_text())
        doc["bound_split_worst"] = 0.5
        report_path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
        code, out, err = run_cli(
            capsys, "verify", "--in", str(instance_path), "--report", str(report_path)
        )
        assert code == 1
        assert "FAIL worst_case<=split_worst" in out
        assert "ERROR VerificationFailed" in err

    def test_missing_file_exit_2(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "analyze", "--in", str(tmp_path / "nope.json"))
        assert code == 2 and err.startswith("ERROR ")


class TestSmallCommands:
    def test_optimal(self, dj_instance, capsys):
        instance_path, _ = dj_instance
        code, out, _ = run_cli(capsys, "optimal", "--in", str(instance_path))
        assert code == 0
        assert out.strip() == "4"

    def test_optimal_cap_exit_3(self, tmp_path, capsys):
        path = tmp_path / "big.instance.json"
        run_cli(capsys, "gen", "--family", "convex_polygon",
                "--param", "m=5", "--param", "balanced=false", "--out", str(path))
        code, _, err = run_cli(capsys, "optimal", "--in", str(path), "--cap", "12")
        assert code == 3
        assert "ERROR InstanceTooLarge" in err

    def test_entropy_values(self, capsys):
        code, out, _ = run_cli(capsys, "entropy", "--p", "1/2")
        assert code == 0 and out.strip() == "1.0"
        code, out, _ = run_cli(capsys, "entropy", "--p", "0/1")
        assert code == 0 and out.strip() == "0.0"
        code, out, _ = run_cli(capsys, "entropy", "--p", "1/5")
        assert code == 0 and abs(float(out) - 0.721928094887) < 1e-9

    def test_entropy_rejects_bad_input(self, capsys):
        assert run_cli(capsys, "entropy", "--p", "3/2")[0] == 2
        assert run_cli(capsys, "entropy", "--p", "zebra")[0] == 2

    def test_unknown_flag_rejected(self, capsys):
        code, _, err = run_cli(capsys, "entropy", "--p", "1/2", "--frobnicate")
        assert code == 2 and "ERROR UsageError" in err

    def test_threads_env_fallback(self, dj_instance, capsys, monkeypatch):
        instance_path, _ = dj_instance
        monkeypatch.setenv("SPLITFINDER_THREADS", "2")
        code, out, _ = run_cli(capsys, "run", "--in", str(instance_path), "--oracle", "all")
        assert code == 0 and "worst_case=4" in out
        monkeypatch.setenv("SPLITFINDER_THREADS", "soup")
        assert run_cli(capsys, "run", "--in", str(instance_path))[0] == 2


class TestSweep:
    def test_grid_produces_csv(self, tmp_path, capsys):
        out_path = tmp_path / "sweep.csv"
        code, out, _ = run_cli(
            capsys, "sweep", "--family", "disjunction",
            "--grid", "d=4,5,6", "--param", "m=2", "--out", str(out_path),
        )
        assert code == 0
        lines = out_path.read_text().strip().splitlines()
        assert len(lines) == 4  # header + 3 rows
        assert lines[0].startswith("name,")
        assert "disjunction_d5_m2" in lines[2]

    def test_sweep_reruns_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            code, _, _ = run_cli(capsys, "sweep", "--family", "disjunction",
                                 "--grid", "m=1,2", "--param", "d=4", "--out", str(path))
            assert code == 0
        assert a.read_bytes() == b.read_bytes()


class TestInteractiveSubprocess:
    def test_protocol_round(self, tmp_path):
        instance_path = tmp_path / "dj31.instance.json"
        assert subprocess.run(
            [sys.executable, "-m", "splitfinder.cli", "gen", "--family", "disjunction",
             "--param", "d=3", "--param", "m=1", "--out", str(instance_path)],
            capture_output=True,
        ).returncode == 0
        proc = subprocess.run(
            [sys.executable, "-m", "splitfinder.cli", "interactive", "--in", str(instance_path)],
            input="1\n0\n1\n0\n",
            capture_output=True,
            text=True,
            timeout=60,
        )
        assert proc.returncode == 0
        lines = proc.stdout.strip().splitlines()
        assert lines[0].startswith("QUERY ")
        assert lines[-1].startswith("IDENTIFIED ")
