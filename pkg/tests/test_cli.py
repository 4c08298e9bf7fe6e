import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import json

import pytest

from lie_tools.graded_ring import GradedSeries
from loci.acceptance import SUITES
from loci.cli import run


class TestOutput:

    def test_locus_latex(self, capsys):
        assert run(["locus", "--m", "4", "--growth", "2,2,4", "--format", "latex"]) == 0
        assert capsys.readouterr().out.strip() == "w_2(M)+w_2(V)+w_1(V)^2"

    def test_locus_text(self, capsys):
        assert run(["locus", "--m", "4", "--growth", "2,2,3,4"]) == 0
        out = capsys.readouterr().out
        assert "cd: 3" in out
        assert "reduced: [2, 3]" in out

    def test_locus_json(self, capsys):
        assert run(["locus", "--m", "4", "--growth", "2,3,3", "--form", "mu", "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["growth"] == [2, 3, 3]
        assert data["mu"] == [1, 1]
        klass = GradedSeries.from_dict(data["class"])
        assert str(klass) == "w_2(M) + w_1(M)^2 + w_1(M) w_1(V) + w_1(V)^2"

    def test_dims_json(self, capsys):
        assert run(["dims", "--n", "2", "--kmax", "5", "--format", "json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert [row["d"] for row in rows] == [2, 1, 2, 3, 6]
        assert [row["partial"] for row in rows] == [2, 3, 5, 8, 14]
        assert all(row["witt_bound"] is True for row in rows)

    def test_dims_with_m(self, capsys):
        assert run(["dims", "--n", "2", "--kmax", "3", "--m", "4", "--format", "json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert rows[0]["dimJ"] == "-"
        assert rows[1]["dimJ"] == 20

    def test_chern(self, capsys):
        assert run(["chern", "--n", "2", "--k", "2", "--order", "4"]) == 0
        assert capsys.readouterr().out.strip() == "1 + c_1"

    def test_chern_mod2_json(self, capsys):
        assert run(["chern", "--n", "2", "--k", "3", "--mod2", "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["rank"] == 2
        assert data["class"]["field"] == "F2"

    def test_hall_json(self, capsys):
        assert run(["hall", "--n", "2", "--kmax", "3", "--compact", "--format", "json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert [row["word"] for row in rows] == ["u", "v", "(u,v)", "(u(u,v))", "(v(u,v))"]
        assert [row["rank"] for row in rows] == [1, 2, 3, 4, 5]

    def test_strata_oracle_for_planes(self, capsys):
        assert run(["strata", "--n", "2", "--m", "4", "--oracle"]) == 0
        assert "potentially_admissible" in capsys.readouterr().out

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "chern.txt"
        assert run(["chern", "--n", "2", "--k", "2", "--out", str(target)]) == 0
        assert capsys.readouterr().out == ""
        assert target.read_text().strip() == "1 + c_1"

    def test_check_examples(self, capsys):
        assert run(["check", "--suite", "examples"]) == 0
        out = capsys.readouterr().out
        assert "PASS [examples]" in out
        assert "0 failed" in out

    @pytest.mark.parametrize("suite", sorted(SUITES))
    def test_every_suite_passes(self, suite, capsys):
        assert run(["check", "--suite", suite, "--format", "json"]) == 0
        results = json.loads(capsys.readouterr().out)
        assert results
        assert all(res["suite"] == suite and res["passed"] for res in results)

    def test_hall_raw_depth(self, capsys):
        assert run(["hall", "--n", "2", "--kmax", "3", "--raw-depth", "--format", "json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert [row["raw_depth"] for row in rows] == [row["depth"] - 1 for row in rows]
        assert [row["raw_depth"] for row in rows] == [0, 0, 1, 2, 2]

    def test_hall_without_raw_depth(self, capsys):
        assert run(["hall", "--n", "2", "--kmax", "2", "--format", "json"]) == 0
        assert all("raw_depth" not in row for row in json.loads(capsys.readouterr().out))


class TestExitCodes:

    @pytest.mark.parametrize("argv", [
        [],
        ["locus"],
        ["locus", "--m", "4", "--growth", "2,x"],
        ["chern", "--n", "2", "--k", "2", "--format", "yaml"],
        ["hall", "--n", "2", "--kmax", "0"],
        ["dims", "--n", "0", "--kmax", "3"],
        ["chern", "--n", "2", "--k", "-1"],
        ["chern", "--n", "2", "--k", "2", "--order", "-1"],
        ["strata", "--n", "3", "--m", "zero"],
    ])
    def test_usage_errors(self, argv):
        assert run(argv) == 2

    def test_invalid_growth_vector(self, capsys):
        assert run(["locus", "--m", "6", "--growth", "2,5"]) == 1
        assert "error: r_2=5 exceeds partial dimension 3" in capsys.readouterr().err

    def test_closed_form_needs_three_generators(self, capsys):
        assert run(["strata", "--n", "2", "--m", "4"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_unknown_suite(self, capsys):
        assert run(["check", "--suite", "nope"]) == 1
        assert "Unknown suite" in capsys.readouterr().err

    def test_range_error_message(self, capsys):
        assert run(["hall", "--n", "2", "--kmax", "0"]) == 2
        assert "expected an integer >= 1, got 0" in capsys.readouterr().err
