import json
import math

import numpy as np
import pytest

from dicke_lmg.cli import (CSV_HEADER, main, read_csv, write_csv, write_json)
from dicke_lmg.sweep import GridRecord


class TestExitCodes:
    def test_success(self, capsys):
        code = main(["solve", "--na", "3", "--delta", "0", "--lambda", "0.5"])
        assert code == 0
        out = capsys.readouterr().out
        assert "energy" in out and "subspace_index" in out

    def test_usage_error_missing_required_flag(self, capsys):
        assert main(["solve", "--delta", "0", "--lambda", "0.5"]) == 2

    def test_usage_error_missing_detuning(self, capsys):
        assert main(["solve", "--na", "3", "--lambda", "0.5"]) == 2
        assert "usage error" in capsys.readouterr().err

    def test_usage_error_inconsistent_delta_omega(self, capsys):
        code = main(["solve", "--na", "3", "--wf", "1.0", "--delta", "0.5",
                     "--omega", "2.0", "--lambda", "0.5"])
        assert code == 2
        assert "inconsistent" in capsys.readouterr().err

    def test_consistent_delta_omega_accepted(self, capsys):
        code = main(["solve", "--na", "3", "--wf", "1.0", "--delta", "0.5",
                     "--omega", "1.5", "--lambda", "0.5"])
        assert code == 0

    def test_runtime_failure(self, capsys):
        # cutoff cap is hit long before a lam this deep converges
        code = main(["solve", "--na", "2", "--delta", "0", "--lambda", "40",
                     "--solver", "full"])
        assert code == 1
        assert "error" in capsys.readouterr().err


class TestSolve:
    def test_json_output_round_trips(self, capsys):
        assert main(["solve", "--na", "5", "--delta", "0", "--lambda", "0.5",
                     "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["solver"] == "rwa"
        assert report["subspace_index"] == 0
        assert report["energy"] == pytest.approx(-2.5, abs=1e-12)
        assert report["leading_amplitudes"][0]["photons"] == 0

    def test_full_solver_reports_cutoff(self, capsys):
        assert main(["solve", "--na", "2", "--delta", "0", "--lambda", "0.3",
                     "--solver", "full", "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["solver"] == "full"
        assert report["n_cut_used"] >= 16
        assert report["tail_mass"] < 1e-10


class TestCritical:
    def test_resonant_values(self, capsys):
        assert main(["critical", "--na", "5", "--delta", "0"]) == 0
        out = capsys.readouterr().out
        lines = dict()
        for line in out.strip().splitlines():
            key, _, value = line.partition("=")
            lines[key.strip()] = value.strip()
        assert float(lines["lambda_c1[ rwa]"]) == pytest.approx(1.0, abs=1e-15)
        assert float(lines["lambda_c1[  cr]"]) == pytest.approx(1.0, abs=1e-15)
        assert float(lines["lambda_c1[  cl]"]) == pytest.approx(1.0, abs=1e-15)
        assert float(lines["lambda_c1[clcr]"]) == pytest.approx(0.5, abs=1e-15)

    def test_partial_domain_errors_still_succeed(self, capsys):
        # eta > omega: clcr is undefined but the rwa/cl values still print
        assert main(["critical", "--na", "5", "--delta", "0", "--eta",
                     "1.1"]) == 0
        assert "domain error" in capsys.readouterr().out


class TestLadder:
    def test_reports_first_transition(self, capsys):
        assert main(["ladder", "--na", "2", "--delta", "0", "--eta", "0.5",
                     "--lambda-min", "0.5", "--lambda-max", "1.1"]) == 0
        out = capsys.readouterr().out
        assert "subspace 0 -> 1" in out
        lam_star = float(out.split("=")[1].split()[0])
        assert lam_star == pytest.approx(math.sqrt(0.75), abs=1e-8)

    def test_no_transition_message(self, capsys):
        assert main(["ladder", "--na", "5", "--delta", "0",
                     "--lambda-min", "0.1", "--lambda-max", "0.5"]) == 0
        assert "no transitions" in capsys.readouterr().out


class TestCsvRoundTrip:
    def _records(self):
        return [
            GridRecord(lam=0.1, eta=0.0, energy=-1.5, phase_index=0,
                       cw=0.0, entropy_bits=0.0),
            GridRecord(lam=1.0 / 3.0, eta=0.1234567890123456789,
                       energy=-2.7182818284590452, phase_index=3,
                       cw=0.4, entropy_bits=1.0, flags="at_transition"),
            GridRecord(lam=0.5, eta=0.0, energy=float("nan"), phase_index=-1,
                       cw=float("nan"), entropy_bits=float("nan"),
                       flags="noconv"),
        ]

    def test_parse_of_emit_is_identity(self, tmp_path):
        path = str(tmp_path / "grid.csv")
        records = self._records()
        write_csv(records, path)
        back = read_csv(path)
        assert len(back) == len(records)
        for a, b in zip(records, back):
            for attr in ("lam", "eta", "energy", "cw", "entropy_bits"):
                x, y = getattr(a, attr), getattr(b, attr)
                assert (x == y) or (math.isnan(x) and math.isnan(y))
            assert a.phase_index == b.phase_index
            assert a.flags == b.flags

    def test_header_and_line_endings(self, tmp_path):
        path = str(tmp_path / "grid.csv")
        write_csv(self._records(), path)
        raw = open(path, "rb").read()
        assert raw.startswith(CSV_HEADER.encode() + b"\n")
        assert b"\r" not in raw

    def test_rejects_foreign_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError):
            read_csv(str(path))

    def test_json_writer(self, tmp_path):
        path = str(tmp_path / "grid.json")
        write_json(self._records()[:2], path)
        data = json.loads(open(path).read())
        assert data[0]["lambda"] == 0.1
        assert data[1]["phase_index"] == 3


class TestSweepCommand:
    def test_writes_csv_and_sidecar(self, tmp_path, capsys):
        out = str(tmp_path / "sweep.csv")
        code = main(["sweep", "--na", "2", "--delta", "0",
                     "--lambda-min", "0.2", "--lambda-max", "1.4",
                     "--lambda-points", "7", "--eta-min", "0.0",
                     "--eta-max", "0.2", "--eta-points", "2",
                     "--workers", "2", "--out", out])
        assert code == 0
        records = read_csv(out)
        assert len(records) == 14
        meta = json.loads(open(out + ".meta.json").read())
        assert meta["points"] == 14
        assert meta["config"]["na"] == 2
        assert "wall_time_s" in meta

    def test_byte_identical_reruns(self, tmp_path):
        args = ["sweep", "--na", "2", "--delta", "0",
                "--lambda-min", "0.2", "--lambda-max", "1.4",
                "--lambda-points", "5", "--eta-min", "0.0",
                "--eta-max", "0.2", "--eta-points", "2"]
        out_a = str(tmp_path / "a.csv")
        out_b = str(tmp_path / "b.csv")
        assert main(args + ["--workers", "1", "--out", out_a]) == 0
        assert main(args + ["--workers", "4", "--out", out_b]) == 0
        assert open(out_a, "rb").read() == open(out_b, "rb").read()

    def test_threads_env_var(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("DICKE_LMG_THREADS", "2")
        out = str(tmp_path / "env.csv")
        assert main(["sweep", "--na", "2", "--delta", "0",
                     "--lambda-points", "3", "--lambda-min", "0.1",
                     "--lambda-max", "0.3", "--eta-points", "2",
                     "--eta-min", "0", "--eta-max", "0.1",
                     "--out", out]) == 0


class TestConfigFile:
    def test_config_supplies_defaults_flags_win(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("na=5\ndelta=0\nlambda=0.5\n")
        assert main(["--config", str(cfg), "solve"]) == 0
        report_a = capsys.readouterr().out
        assert main(["--config", str(cfg), "solve", "--lambda", "1.2"]) == 0
        report_b = capsys.readouterr().out
        assert report_a != report_b
        assert "subspace_index: 0" in report_a

    def test_comments_and_blank_lines_ignored(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# phase point\n\nna=3\ndelta=0\nlambda=0.4\n")
        assert main(["--config", str(cfg), "solve"]) == 0


class TestCheckCommand:
    def test_single_suite(self, capsys):
        assert main(["check", "--suite", "basis"]) == 0
        assert "[PASS] basis" in capsys.readouterr().out

    def test_unknown_suite_fails(self, capsys):
        assert main(["check", "--suite", "nope"]) == 1
