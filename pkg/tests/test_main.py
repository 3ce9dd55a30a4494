import json

import pytest

from config import ToleranceConfig
from main import main, run_case, suite_resolution
from paper_examples import REGRESSION_MATRIX


@pytest.fixture
def config_file(cfg, tmp_path):
    path = tmp_path / "coarse.json"
    path.write_text(cfg.model_dump_json())
    return str(path)


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCommands:
    def test_list_fixtures(self, capsys, config_file):
        code, out, _ = _run(capsys, "list-fixtures", "--config", config_file)
        assert code == 0
        assert len(json.loads(out)) == 17

    def test_list_fixtures_markdown(self, capsys, config_file):
        code, out, _ = _run(capsys, "list-fixtures", "--all", "--format", "markdown", "--config", config_file)
        assert code == 0
        assert out.startswith("| name | domain |")
        assert "diag_gap" in out

    def test_eval(self, capsys, config_file):
        code, out, _ = _run(capsys, "eval", "--fixture", "ex2_1", "--x", "2", "--y", "0", "--config", config_file)
        assert code == 0
        doc = json.loads(out)
        assert doc["value"] == "[-2, 0]"
        assert doc["x"] == [2.0]

    def test_refuted_check_exits_1(self, capsys, config_file):
        code, out, _ = _run(capsys, "check", "--property", "wcg", "--fixture", "ex2_1",
                            "--options", '{"tuples": [[1, 3]]}', "--config", config_file)
        assert code == 1
        doc = json.loads(out)
        assert doc["overall"] == "fail"
        assert doc["fixture"] == "ex2_1" and doc["cone"] == "Rplus"
        assert doc["checks"][0]["status"] == "Refuted"

    def test_passing_check_exits_0(self, capsys, config_file):
        code, out, _ = _run(capsys, "check", "--property", "qc", "--fixture", "const_A0", "--config", config_file)
        assert code == 0
        assert json.loads(out)["overall"] == "pass"

    def test_verify(self, capsys, config_file):
        code, out, _ = _run(capsys, "verify", "--theorem", "thm45", "--fixture", "ex4_6", "--config", config_file)
        assert code == 0
        assert json.loads(out)["checks"][0]["status"] == "consistent-with-theorem"

    def test_implications(self, capsys, config_file):
        code, out, _ = _run(capsys, "implications", "--fixture", "const_A0", "--config", config_file)
        assert code == 0
        assert {c["action"] for c in json.loads(out)["checks"]} == {"implication"}

    def test_report_to_file(self, capsys, config_file, tmp_path):
        target = tmp_path / "report.md"
        code, out, _ = _run(capsys, "check", "--property", "qc", "--fixture", "const_A0",
                            "--format", "markdown", "--out", str(target), "--config", config_file)
        assert code == 0
        assert out == ""
        assert target.read_text().startswith("# Verification report: const_A0")

    def test_custom_fixture_file(self, capsys, config_file, tmp_path):
        doc = {"name": "flat", "domain": {"lower": 0, "upper": 1}, "codomain_dim": 1,
               "branches": [{"when": "True", "value": "interval(0, 1)"}]}
        path = tmp_path / "flat.json"
        path.write_text(json.dumps(doc))
        code, out, _ = _run(capsys, "check", "--property", "qc", "--fixture-file", str(path), "--config", config_file)
        assert code == 0
        assert json.loads(out)["fixture"] == "flat"

    def test_call(self, capsys, config_file):
        code, out, _ = _run(capsys, "call", "--name", "list_fixtures", "--input", "{}", "--config", config_file)
        assert code == 0
        assert len(json.loads(out)["fixtures"]) == 17


class TestExitCodes:
    def test_unknown_property(self, capsys, config_file):
        code, out, err = _run(capsys, "check", "--property", "nice", "--fixture", "ex3_1", "--config", config_file)
        assert code == 2
        assert out == ""
        assert err.startswith("error: unknown property")

    def test_unknown_fixture(self, capsys, config_file):
        code, _, err = _run(capsys, "verify", "--theorem", "thm45", "--fixture", "ex9_9", "--config", config_file)
        assert code == 2
        assert "unknown fixture" in err

    def test_bad_options_json(self, capsys):
        code, _, _ = _run(capsys, "check", "--property", "qc", "--fixture", "ex3_1", "--options", "{oops")
        assert code == 2

    def test_missing_subcommand(self, capsys):
        assert _run(capsys)[0] == 2

    def test_bad_resolution(self, capsys):
        code, _, err = _run(capsys, "list-fixtures", "--resolution", "0")
        assert code == 2
        assert err.startswith("error:")

    def test_call_with_rejected_input(self, capsys, config_file):
        code, out, _ = _run(capsys, "call", "--name", "check_property", "--input", "{}", "--config", config_file)
        assert code == 2
        assert "error" in json.loads(out)


class TestSuite:
    def test_resolution_is_a_multiple_of_four(self):
        assert suite_resolution(50) == 52
        assert suite_resolution(20) == 20
        assert suite_resolution(21) == 24

    def test_restricted_suite(self, capsys, config_file):
        code, out, _ = _run(capsys, "suite", "--fixture", "diag_gap", "--config", config_file)
        assert code == 0
        doc = json.loads(out)
        assert [c["id"] for c in doc["checks"]] == ["diag_gap/thm41_i"]
        assert doc["checks"][0]["expected"] == "no-certificate"

    def test_suite_output_is_byte_stable(self, capsys, config_file):
        argv = ("suite", "--fixture", "diag_gap", "--fixture", "ex2_1", "--config", config_file)
        _, first, _ = _run(capsys, *argv)
        _, second, _ = _run(capsys, *argv)
        assert first == second
        doc = json.loads(first)
        assert "created" not in doc
        assert len(doc["checks"]) == 3

    def test_no_cases(self, capsys, config_file):
        code, _, err = _run(capsys, "suite", "--fixture", "ex9_9", "--config", config_file)
        assert code == 2
        assert "no regression cases" in err


@pytest.mark.slow
@pytest.mark.parametrize("case", REGRESSION_MATRIX, ids=lambda c: c.case_id)
def test_regression_matrix(case):
    cfg = ToleranceConfig(grid_resolution=suite_resolution(ToleranceConfig().grid_resolution))
    entry = run_case(case, cfg)
    assert entry.status == case.expected, entry.notes
