import json

import pytest

from tools import VerificationTools

INLINE = {
    "name": "custom_ex3_1",
    "domain": {"lower": 0, "upper": 1},
    "codomain_dim": 1,
    "branches": [
        {"when": "x <= y", "value": "interval(-1, y)"},
        {"when": "y < x", "value": "interval(-x, y)"},
    ],
}


@pytest.fixture
def tools(cfg):
    return VerificationTools(cfg)


def _call(tools, name, params):
    return json.loads(tools.call(name, json.dumps(params)))


class TestRegistry:
    def test_tool_names(self, tools):
        assert [t.name for t in tools.tools] == [
            "list_fixtures", "evaluate_fixture", "check_property",
            "verify_theorem", "check_implications", "replay_verdict",
        ]

    def test_unknown_tool(self, tools):
        assert "Unknown tool" in json.loads(tools.call("solve_everything", "{}"))["error"]
        with pytest.raises(KeyError):
            tools.tool("solve_everything")


class TestErrors:
    @pytest.mark.parametrize("name", ["list_fixtures", "evaluate_fixture", "check_property",
                                      "verify_theorem", "check_implications", "replay_verdict"])
    def test_invalid_input(self, tools, name):
        assert json.loads(tools.call(name, "not json"))["error"] == "Invalid input format"
        assert json.loads(tools.call(name, "[1, 2]"))["error"] == "Invalid input format"

    def test_missing_fields(self, tools):
        assert "property" in _call(tools, "check_property", {"fixture": "ex3_1"})["error"]
        assert "theorem" in _call(tools, "verify_theorem", {"fixture": "ex3_1"})["error"]
        assert "x and y" in _call(tools, "evaluate_fixture", {"fixture": "ex3_1", "x": 0.5})["error"]
        assert "verdict" in _call(tools, "replay_verdict", {})["error"]

    def test_rejected_values_come_back_as_errors(self, tools):
        assert "unknown fixture" in _call(tools, "check_property", {"fixture": "ex9_9", "property": "qc"})["error"]
        assert "unknown property" in _call(tools, "check_property", {"fixture": "ex3_1", "property": "nice"})["error"]
        assert "options" in _call(tools, "check_property",
                                  {"fixture": "ex3_1", "property": "qc", "options": [1]})["error"]
        assert "unknown theorem" in _call(tools, "verify_theorem", {"fixture": "ex4_2", "theorem": "thm99"})["error"]
        assert "not a verdict" in _call(tools, "replay_verdict", {"verdict": {"status": "Refuted"}})["error"]


class TestCalls:
    def test_list_fixtures(self, tools):
        assert len(_call(tools, "list_fixtures", {})["fixtures"]) == 17
        assert len(_call(tools, "list_fixtures", {"include_auxiliary": True})["fixtures"]) == 21

    def test_evaluate_fixture(self, tools):
        doc = _call(tools, "evaluate_fixture", {"fixture": "ex3_1", "x": 0.5, "y": 0.2})
        assert doc["fixture"] == "ex3_1"
        assert min(p[0] for p in doc["points"]) == pytest.approx(-0.5)
        assert max(p[0] for p in doc["points"]) == pytest.approx(0.2)

    def test_evaluate_inline_fixture(self, tools):
        doc = _call(tools, "evaluate_fixture", {"fixture_spec": INLINE, "x": 0.5, "y": 0.2})
        assert doc["fixture"] == "custom_ex3_1"

    def test_check_property(self, tools):
        doc = _call(tools, "check_property", {"fixture": "ex2_1", "property": "wcg",
                                              "options": {"tuples": [[1, 3]]}})
        assert doc["status"] == "Refuted"
        assert doc["fixture"] == "ex2_1"
        assert doc["options"]["tuples"] == [[1, 3]]

    def test_replay_round_trip(self, tools):
        verdict = _call(tools, "check_property", {"fixture": "ex2_1", "property": "wcg",
                                                  "options": {"tuples": [[1, 3]]}})
        doc = _call(tools, "replay_verdict", {"verdict": verdict})
        assert doc["recorded"] == doc["replayed"] == "Refuted"
        assert doc["reproduced"]

    def test_verify_theorem(self, tools):
        doc = _call(tools, "verify_theorem", {"fixture": "ex4_6", "theorem": "thm45"})
        assert doc["status"] == "consistent-with-theorem"
        assert doc["conclusion"]["certificate"]["theorem"] == "thm45"

    def test_check_implications(self, tools):
        doc = _call(tools, "check_implications", {"fixture": "const_A0"})
        assert doc["consistent"]
        assert len(doc["implications"]) == 5
