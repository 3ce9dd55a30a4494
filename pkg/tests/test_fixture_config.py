import json

import pytest

from cones import parse_cone
from fixture_config import FixtureConfigError, compile_condition, fixture_from_dict, load_fixture_file
from paper_examples import build_fixture

EX3_1 = {
    "name": "custom_ex3_1",
    "domain": {"lower": 0, "upper": 1},
    "codomain_dim": 1,
    "cone": "Rplus",
    "branches": [
        {"when": "x <= y", "value": "interval(-1, y)"},
        {"when": "y < x", "value": "interval(-x, y)"},
    ],
}


def _doc(**changes):
    doc = json.loads(json.dumps(EX3_1))
    doc.update(changes)
    return doc


class TestConditions:
    def test_tolerant_comparisons(self):
        below = compile_condition("x <= y")
        assert below(0.3, 0.3 - 1e-14)
        assert not below(0.4, 0.3)

    def test_compound_condition(self):
        cond = compile_condition("(x <= y) & (y < 0.5)")
        assert cond(0.1, 0.2)
        assert not cond(0.1, 0.7)
        assert compile_condition("~(x < 0.5) | Eq(y, 1)")(0.2, 1.0)

    def test_catch_all(self):
        assert compile_condition("True")(0.3, 0.9)

    @pytest.mark.parametrize("text", ["x == y", "x*y <= 1", "z <= 1", "x +", "x"])
    def test_rejected_conditions(self, text):
        with pytest.raises(FixtureConfigError):
            compile_condition(text)


class TestFixtureDocuments:
    def test_matches_the_builtin(self, cfg):
        custom = fixture_from_dict(EX3_1, cfg.grid_resolution, cfg.sampling())
        builtin = build_fixture("ex3_1", cfg.grid_resolution, cfg.sampling())
        for x, y in [(0.0, 0.0), (0.5, 0.2), (0.2, 0.5), (1.0, 0.35)]:
            assert custom.evaluate(x, y) == builtin.evaluate(x, y)

    def test_equality_tests(self, cfg):
        doc = _doc(branches=[
            {"when": "Eq(x, y)", "value": "point(0)"},
            {"when": "Ne(x, y)", "value": "point(1)"},
        ], single_valued=True)
        fx = fixture_from_dict(doc, 10, cfg.sampling())
        assert fx.evaluate(0.5, 0.5).to_list() == [[0.0]]
        assert fx.evaluate(0.5, 0.3).to_list() == [[1.0]]

    def test_planar_values_and_cone_objects(self, cfg):
        doc = _doc(codomain_dim=2, cone={"normals": [[1, 0], [0, 1]]}, branches=[
            {"when": "x <= y", "value": "point(x, y)"},
            {"when": "y < x", "value": "disc(x, y, 0.25)"},
        ])
        fx = fixture_from_dict(doc, 10, cfg.sampling())
        assert fx.evaluate(0.2, 0.6).to_list() == [[0.2, 0.6]]
        assert parse_cone(fx.default_cone).dim == 2

    @pytest.mark.parametrize("branches", [
        [],
        [{"when": "True"}],
        [{"when": "True", "value": "interval(0)"}],
        [{"when": "True", "value": "disc(0, 0, 1)"}],
        [{"when": "True", "value": "segment(0, 1)"}],
        [{"when": "True", "value": "point(0, 1)"}],
    ])
    def test_rejected_branches(self, branches):
        with pytest.raises(FixtureConfigError):
            fixture_from_dict(_doc(branches=branches))

    def test_missing_name(self):
        doc = _doc()
        del doc["name"]
        with pytest.raises(FixtureConfigError):
            fixture_from_dict(doc)

    def test_bad_domain(self):
        with pytest.raises(FixtureConfigError):
            fixture_from_dict(_doc(domain={"lower": 1, "upper": 0}))

    def test_files(self, tmp_path, cfg):
        path = tmp_path / "map.json"
        path.write_text(json.dumps(EX3_1))
        fx = load_fixture_file(str(path), cfg.grid_resolution, cfg.sampling())
        assert fx.name == "custom_ex3_1"
        with pytest.raises(FixtureConfigError):
            load_fixture_file(str(tmp_path / "missing.json"))
        path.write_text("[1, 2]")
        with pytest.raises(FixtureConfigError):
            load_fixture_file(str(path))
