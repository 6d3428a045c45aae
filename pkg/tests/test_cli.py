"""Tests for the command-line interface."""

import pytest

from ecocycle.cli import main


class TestList:
    def test_catalog_listing(self, capsys):
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        for fid in ("f1", "f7", "f23"):
            assert fid in out
        for rid in ("rc15", "rc17", "rc19", "rc20", "rc31"):
            assert rid in out


class TestEval:
    def test_classic_point(self, capsys):
        assert main(["eval", "--problem", "f1", "--point", "1,2", "--dim", "2"]) == 0
        out = capsys.readouterr().out
        assert "5" in out  # 1^2 + 2^2

    def test_engineering_point_lists_constraints(self, capsys):
        point = "0.78867513,0.40824830"
        assert main(["eval", "--problem", "rc20", "--point", point]) == 0
        out = capsys.readouterr().out
        assert "263.895" in out
        assert out.count("g1") == 1
        flags = [line for line in out.splitlines() if line.endswith("satisfied")]
        assert len(flags) == 3

    def test_unknown_problem_exits_2(self, capsys):
        assert main(["eval", "--problem", "f99", "--point", "1"]) == 2
        assert "f99" in capsys.readouterr().err

    def test_dimension_mismatch_exits_2(self, capsys):
        assert main(["eval", "--problem", "rc20", "--point", "1,2,3"]) == 2
        assert capsys.readouterr().err != ""

    def test_malformed_point_exits_2(self, capsys):
        assert main(["eval", "--problem", "f1", "--point", "1,abc", "--dim", "2"]) == 2
        assert capsys.readouterr().err != ""


class TestRun:
    def test_tiny_run_writes_reports(self, tmp_path, capsys):
        rc = main(
            [
                "run",
                "--suite",
                "classic",
                "--problem",
                "f1",
                "--alg",
                "eco,pso",
                "--dim",
                "2",
                "--runs",
                "2",
                "--max-fes",
                "400",
                "--seed",
                "5",
                "--out",
                str(tmp_path / "res"),
            ]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert f"wrote {tmp_path / 'res'}" in out
        assert "problem,algorithm,min,ave,std,feasible_rate" in out
        assert "friedman mean ranks:" in out
        assert (tmp_path / "res" / "runs.csv").exists()
        assert (tmp_path / "res" / "comparison.json").exists()

    def test_unknown_algorithm_exits_2(self, tmp_path, capsys):
        rc = main(
            [
                "run",
                "--suite",
                "classic",
                "--problem",
                "f1",
                "--alg",
                "annealing",
                "--out",
                str(tmp_path),
            ]
        )
        assert rc == 2
        assert "annealing" in capsys.readouterr().err

    def test_problem_outside_suite_exits_2(self, tmp_path, capsys):
        rc = main(
            [
                "run",
                "--suite",
                "classic",
                "--problem",
                "rc15",
                "--out",
                str(tmp_path),
            ]
        )
        assert rc == 2
        assert capsys.readouterr().err != ""
