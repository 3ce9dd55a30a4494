import json
import logging
from typing import Any, Dict, Optional

from langchain_core.tools import Tool

from checkers import check_implications, implications_table, replay_verdict, run_check
from config import ToleranceConfig
from fixture_config import fixture_from_dict
from helper import load_cone, load_fixture
from minimax import run_theorem_suite
from paper_examples import fixture_catalog
from verdicts import Verdict, to_jsonable

logger = logging.getLogger(__name__)


class VerificationTools():
    """
    JSON-in / JSON-out facade over the checkers and the theorem verifier.

    Every tool takes a JSON string and returns a JSON string; rejected input
    comes back as {"error": "..."} instead of raising.
    """

    def __init__(self, cfg: Optional[ToleranceConfig] = None):
        self.cfg = cfg or ToleranceConfig()

        self.tools = [
            Tool(
                name="list_fixtures",
                func=self.list_fixtures,
                description="Lists the built-in fixtures. Expects JSON input with optional include_auxiliary."
            ),
            Tool(
                name="evaluate_fixture",
                func=self.evaluate_fixture,
                description="Evaluates a fixture at one grid point. Expects JSON input with fixture (or fixture_spec), x, y."
            ),
            Tool(
                name="check_property",
                func=self.check_property,
                description="Runs one property check. Expects JSON input with fixture, property, and optional cone, arg, polarity, options."
            ),
            Tool(
                name="verify_theorem",
                func=self.verify_theorem,
                description="Checks a theorem's hypotheses and its conclusion on a fixture. Expects JSON input with fixture, theorem, optional cone."
            ),
            Tool(
                name="check_implications",
                func=self.check_implications,
                description="Cross-checks the one-way implications between properties. Expects JSON input with fixture, optional cone, polarity."
            ),
            Tool(
                name="replay_verdict",
                func=self.replay_verdict,
                description="Re-runs the witness of a stored verdict. Expects JSON input with verdict and optional fixture, cone."
            ),
        ]

    def tool(self, name: str) -> Tool:
        for t in self.tools:
            if t.name == name:
                return t
        raise KeyError(name)

    def call(self, name: str, action_input: str) -> str:
        try:
            t = self.tool(name)
        except KeyError:
            known = ", ".join(t.name for t in self.tools)
            return json.dumps({"error": f"Unknown tool '{name}'; known: {known}"})
        return t.func(action_input)

    def _params(self, action_input: str) -> Optional[Dict[str, Any]]:
        try:
            params = json.loads(action_input or "{}")
        except json.JSONDecodeError:
            return None
        return params if isinstance(params, dict) else None

    def _fixture(self, params: Dict[str, Any]):
        spec = params.get("fixture_spec")
        if spec is not None:
            return fixture_from_dict(spec, self.cfg.grid_resolution, self.cfg.sampling())
        return load_fixture(params.get("fixture"), cfg=self.cfg)

    def list_fixtures(self, action_input: str) -> str:
        """
        action_input = {"include_auxiliary": false}
        """
        params = self._params(action_input)
        if params is None:
            return json.dumps({"error": "Invalid input format"})
        catalog = fixture_catalog(bool(params.get("include_auxiliary", False)), self.cfg.grid_resolution)
        return json.dumps({"fixtures": to_jsonable(catalog.to_dict(orient="records"))})

    def evaluate_fixture(self, action_input: str) -> str:
        """
        action_input = {"fixture": "ex3_1", "x": 0.5, "y": 0.2}
        Outputs the value set and its sampled points.
        """
        params = self._params(action_input)
        if params is None:
            return json.dumps({"error": "Invalid input format"})
        if params.get("x") is None or params.get("y") is None:
            return json.dumps({"error": "Missing required fields x and y"})
        try:
            fx = self._fixture(params)
            value = fx.value_set(params["x"], params["y"])
            cloud = fx.evaluate(params["x"], params["y"])
        except ValueError as exc:
            return json.dumps({"error": str(exc)})
        return json.dumps({
            "fixture": fx.name,
            "x": to_jsonable(params["x"]),
            "y": to_jsonable(params["y"]),
            "value": value.describe(),
            "points": cloud.to_list(),
        })

    def check_property(self, action_input: str) -> str:
        """
        action_input = {
            "fixture": "ex3_2",
            "property": "pair_properly_v",
            "cone": "R2plus",
            "arg": "first",
            "polarity": "convex",
            "options": {"tuples": [[[0.0667, 0.9], [0.25, 0.2]]]}
        }
        Outputs the verdict document.
        """
        params = self._params(action_input)
        if params is None:
            return json.dumps({"error": "Invalid input format"})
        if not params.get("property"):
            return json.dumps({"error": "Missing required field property"})
        options = params.get("options") or {}
        if not isinstance(options, dict):
            return json.dumps({"error": "options must be a JSON object"})
        try:
            fx = self._fixture(params)
            cone = load_cone(params.get("cone"), fx, self.cfg)
            verdict = run_check(fx, cone, params["property"], self.cfg,
                                params.get("arg", "first"), params.get("polarity", "convex"), **options)
        except ValueError as exc:
            return json.dumps({"error": str(exc)})
        return json.dumps(verdict.to_dict())

    def verify_theorem(self, action_input: str) -> str:
        """
        action_input = {"fixture": "ex4_2", "theorem": "cor41_i", "cone": "Rplus"}
        """
        params = self._params(action_input)
        if params is None:
            return json.dumps({"error": "Invalid input format"})
        if not params.get("theorem"):
            return json.dumps({"error": "Missing required field theorem"})
        try:
            fx = self._fixture(params)
            cone = load_cone(params.get("cone"), fx, self.cfg)
            report = run_theorem_suite(fx, cone, params["theorem"], self.cfg)
        except ValueError as exc:
            return json.dumps({"error": str(exc)})
        return json.dumps(report.to_dict())

    def check_implications(self, action_input: str) -> str:
        """
        action_input = {"fixture": "ex3_1", "cone": "Rplus", "polarity": "convex"}
        """
        params = self._params(action_input)
        if params is None:
            return json.dumps({"error": "Invalid input format"})
        try:
            fx = self._fixture(params)
            cone = load_cone(params.get("cone"), fx, self.cfg)
            results = check_implications(fx, cone, self.cfg, params.get("polarity", "convex"))
        except ValueError as exc:
            return json.dumps({"error": str(exc)})
        rows = implications_table(results).to_dict(orient="records")
        return json.dumps({"fixture": fx.name, "implications": to_jsonable(rows),
                           "consistent": all(r.consistent for r in results)})

    def replay_verdict(self, action_input: str) -> str:
        """
        action_input = {"verdict": {...a check_property result...}}
        The fixture and cone default to the ones recorded in the verdict.
        """
        params = self._params(action_input)
        if params is None:
            return json.dumps({"error": "Invalid input format"})
        data = params.get("verdict")
        if not isinstance(data, dict):
            return json.dumps({"error": "Missing required field verdict"})
        try:
            verdict = Verdict.from_dict(data)
            fx = self._fixture({"fixture": verdict.fixture, **params})
            cone = load_cone(params.get("cone") or verdict.cone, fx, self.cfg)
            replayed = replay_verdict(verdict, fx, cone, self.cfg)
        except ValueError as exc:
            return json.dumps({"error": str(exc)})
        return json.dumps({
            "recorded": verdict.status.value,
            "replayed": replayed.status.value,
            "reproduced": replayed.status is verdict.status,
            "verdict": replayed.to_dict(),
        })
