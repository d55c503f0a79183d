"""CLI surface: commands, formats, exit codes, determinism, pipes."""

import csv
import io
import json
import subprocess
import sys

import pytest

from cliffroot.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestDerive:
    def test_text_cl01(self, capsys):
        code, out, _ = run(capsys, "derive", "--sig", "0,1")
        assert code == 0
        assert "alpha^2 - beta^2 + 1 = 0" in out

    def test_text_cl20_contains_root_equation(self, capsys):
        code, out, _ = run(capsys, "derive", "--sig", "2,0")
        assert code == 0
        assert "alpha^2 + b1^2 + b2^2 - beta^2 + 1 = 0" in out

    def test_json_schema(self, capsys):
        code, out, _ = run(capsys, "derive", "--sig", "1,1", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["signature"] == [1, 1]
        assert len(data["forms"]) == 4

    def test_csv_has_header(self, capsys):
        code, out, _ = run(capsys, "derive", "--sig", "1,0", "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["mask", "blade", "i", "j", "coef"]

    def test_out_of_range_signature(self, capsys):
        code, _, err = run(capsys, "derive", "--sig", "9,9")
        assert code == 2
        assert "error" in err

    def test_malformed_signature(self, capsys):
        code, _, _ = run(capsys, "derive", "--sig", "2")
        assert code == 2


class TestVerify:
    def test_root_exit_zero(self, capsys):
        code, out, _ = run(capsys, "verify", "--sig", "3,0", "--mv", "e123")
        assert code == 0
        assert "is_root: true" in out

    def test_non_root_exit_one(self, capsys):
        code, out, _ = run(capsys, "verify", "--sig", "2,1", "--mv", "e123")
        assert code == 1
        assert "residual_norm: 2.0" in out

    def test_scalar_non_root(self, capsys):
        code, _, _ = run(capsys, "verify", "--sig", "0,1", "--mv", "0.5")
        assert code == 1

    def test_parse_error_exit_two(self, capsys):
        code, _, err = run(capsys, "verify", "--sig", "2,0", "--mv", "e7+")
        assert code == 2
        assert "position" in err


class TestSample:
    def test_json_records_verify(self, capsys):
        code, out, _ = run(capsys, "sample", "--sig", "1,3",
                           "--case", "N4_Z_BPN0_BN0_BEN0",
                           "--count", "3", "--seed", "7", "--format", "json")
        assert code == 0
        lines = [l for l in out.splitlines() if l.strip()]
        assert len(lines) == 3
        for line in lines:
            record = json.loads(line)
            assert record["residual"] < 1e-9
            assert record["case"] == "N4_Z_BPN0_BN0_BEN0"

    def test_determinism(self, capsys):
        args = ("sample", "--sig", "0,3", "--case", "N3_A0B0",
                "--count", "5", "--seed", "11", "--format", "json")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2

    def test_csv_layout(self, capsys):
        code, out, _ = run(capsys, "sample", "--sig", "2,0", "--case", "N2_A0",
                           "--count", "2", "--seed", "1", "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["signature", "case", "1", "e1", "e2", "e12", "residual"]
        assert len(rows) == 3

    def test_unknown_case(self, capsys):
        code, _, err = run(capsys, "sample", "--sig", "2,0", "--case", "NOPE")
        assert code == 2
        assert "unknown case" in err

    def test_case_signature_mismatch(self, capsys):
        code, _, _ = run(capsys, "sample", "--sig", "1,0", "--case", "N1_NEG")
        assert code == 2

    def test_empty_region_exit_one(self, capsys):
        code, _, err = run(capsys, "sample", "--sig", "0,2", "--case", "N2_A0",
                           "--scale", "1e6")
        assert code == 1
        assert "sampling failed" in err


class TestClassify:
    def test_direct(self, capsys):
        code, out, _ = run(capsys, "classify", "--sig", "3,0", "--mv", "e123")
        assert code == 0
        assert out.startswith("N3_PSEUDO")

    def test_pipe_round_trip(self, capsys, monkeypatch):
        code, out, _ = run(capsys, "sample", "--sig", "1,3", "--case", "N4_A0_APN0",
                           "--count", "2", "--seed", "3", "--format", "json")
        assert code == 0
        monkeypatch.setattr(sys, "stdin", io.StringIO(out))
        code, piped, _ = run(capsys, "classify", "--format", "json")
        assert code == 0
        for line in piped.splitlines():
            assert json.loads(line)["case"] == "N4_A0_APN0"

    def test_not_a_root_exit_one(self, capsys):
        code, out, _ = run(capsys, "classify", "--sig", "1,0", "--mv", "e1")
        assert code == 1
        assert "not a root" in out

    def test_requires_sig_with_mv(self, capsys):
        code, _, _ = run(capsys, "classify", "--mv", "e1")
        assert code == 2

    def test_empty_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO(""))
        code, _, _ = run(capsys, "classify")
        assert code == 2


class TestSolve:
    def test_init_near_e12(self, capsys):
        code, out, _ = run(capsys, "solve", "--sig", "2,0", "--init", "0.9*e12",
                           "--format", "json")
        assert code == 0
        record = json.loads(out)
        assert record["residual"] < 1e-9
        assert record["case"] == "N2_A0"

    def test_cl10_reports_bound(self, capsys):
        code, out, _ = run(capsys, "solve", "--sig", "1,0", "--random", "100",
                           "--seed", "5")
        assert code == 1
        assert "min residual 1.0" in out

    def test_requires_exactly_one_start_mode(self, capsys):
        code, _, _ = run(capsys, "solve", "--sig", "2,0")
        assert code == 2
        code, _, _ = run(capsys, "solve", "--sig", "2,0", "--init", "e12",
                         "--random", "5")
        assert code == 2


class TestScan:
    def test_grid_cl10(self, capsys):
        code, out, _ = run(capsys, "scan", "--sig", "1,0", "--box=-2,2",
                           "--res", "101")
        assert code == 0
        assert "min_residual: 1.0" in out
        assert "analytic_bound" in out

    def test_slice_json(self, capsys):
        code, out, _ = run(capsys, "scan", "--sig", "1,1", "--slice", "alpha=0.5",
                           "--starts", "25", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["mode"] == "slice"
        assert data["min_residual"] > 0.2

    def test_slice_unknown_coordinate(self, capsys):
        code, _, err = run(capsys, "scan", "--sig", "1,1", "--slice", "zeta=1")
        assert code == 2
        assert "unknown coordinate" in err

    def test_requires_exactly_one_mode(self, capsys):
        code, _, _ = run(capsys, "scan", "--sig", "1,0")
        assert code == 2


class TestTable:
    def test_n1_mentions_both_outcomes(self, capsys):
        code, out, _ = run(capsys, "table", "--n", "1")
        assert code == 0
        assert "no solution" in out
        assert "A = +/-e1" in out

    def test_n2_beta_squared_rows(self, capsys):
        code, out, _ = run(capsys, "table", "--n", "2")
        assert code == 0
        assert "beta^2 = b1^2 + b2^2 + 1" in out
        assert "beta^2 = -b1^2 + b2^2 - 1" in out
        assert "beta^2 = -b1^2 - b2^2 + 1" in out

    def test_n4_csv_row_count(self, capsys):
        code, out, _ = run(capsys, "table", "--n", "4", "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["signature", "case", "conditions", "constraints",
                           "root_equation"]
        assert len(rows) - 1 >= 35

    def test_bad_n(self, capsys):
        code, _, _ = run(capsys, "table", "--n", "5")
        assert code == 2


class TestEnvironment:
    def test_format_env_var(self, capsys, monkeypatch):
        monkeypatch.setenv("CLIFFROOT_FORMAT", "json")
        code, out, _ = run(capsys, "verify", "--sig", "3,0", "--mv", "e123")
        assert code == 0
        assert json.loads(out)["is_root"] is True

    def test_invalid_env_var_falls_back(self, capsys, monkeypatch):
        monkeypatch.setenv("CLIFFROOT_FORMAT", "xml")
        code, out, err = run(capsys, "verify", "--sig", "3,0", "--mv", "e123")
        assert code == 0
        assert "is_root: true" in out
        assert "ignoring invalid" in err

    def test_explicit_flag_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("CLIFFROOT_FORMAT", "json")
        code, out, _ = run(capsys, "verify", "--sig", "3,0", "--mv", "e123",
                           "--format", "text")
        assert "is_root: true" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cliffroot", "verify", "--sig", "1,2",
         "--mv", "e123"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0
    assert "is_root: true" in proc.stdout
