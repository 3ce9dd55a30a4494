import numpy as np
import pytest

from fixtures import FixtureError, sweep_nonempty
from paper_examples import REGRESSION_MATRIX, build_fixture, fixture_catalog, fixture_names, regression_table


class TestRegistry:
    def test_seventeen_builtins(self):
        names = fixture_names()
        assert len(names) == 17
        assert "ex2_1" in names and "rem4_2" in names
        assert "diag_gap" not in names

    def test_auxiliary_fixtures_resolve_by_name(self):
        names = fixture_names(include_auxiliary=True)
        assert {"const_A0", "const_disc", "diag_gap", "linear_x"} <= set(names)
        assert build_fixture("diag_gap", 8).single_valued

    def test_unknown_fixture(self):
        with pytest.raises(FixtureError):
            build_fixture("ex9_9")

    def test_catalog(self):
        catalog = fixture_catalog(resolution=8)
        assert len(catalog) == 17
        assert set(catalog.columns) >= {"name", "domain", "codomain_dim", "single_valued", "default_cone"}
        assert catalog.set_index("name").loc["ex2_1", "unary"]

    def test_regression_table(self):
        table = regression_table()
        assert len(table) == len(REGRESSION_MATRIX)
        assert set(table["action"]) == {"check", "verify", "conclusion", "diagonal"}


class TestWorkedExamples:
    @pytest.mark.parametrize("name", fixture_names(include_auxiliary=True))
    def test_every_grid_point_has_a_value(self, name, cfg):
        fx = build_fixture(name, cfg.grid_resolution, cfg.sampling())
        assert sweep_nonempty(fx) == []

    def test_ex2_1_jump(self, cfg):
        fx = build_fixture("ex2_1", 20, cfg.sampling())
        assert fx.value_set(2.0, 0.0).describe() == "[-2, 0]"
        assert fx.value_set(3.0, 0.0).describe() == "(0, 2]"
        assert fx.evaluate(3.0, 0.0).points.min() > 0.0

    def test_ex3_2_third_branch_covers_the_bottom_edge(self, cfg):
        fx = build_fixture("ex3_2", 20, cfg.sampling())
        cloud = fx.evaluate(0.5, 0.0)
        assert cloud.points[:, 0].max() <= 1e-12

    def test_ex3_6_tagged_points_take_the_other_branch(self, cfg):
        fx = build_fixture("ex3_6", 20, cfg.sampling())
        tagged = fx.second_domain.points[fx.second_domain.tags][0]
        value = fx.value_set(0.5, tagged)
        assert value.center == pytest.approx((float(tagged[0]), 0.0))
        assert fx.value_set(0.5, 0.5).center == pytest.approx((0.0, 0.5))

    def test_rem4_2_special_lines(self, cfg):
        fx = build_fixture("rem4_2", 20, cfg.sampling())
        assert fx.value_set(0.5, 1.0).describe() == "[0, 1]"
        assert fx.value_set(0.1, 0.5).describe() == "[0, 1]"
        assert fx.value_set(0.5, 0.5).describe() == "{(0)}"

    def test_ex4_7_points(self, cfg):
        fx = build_fixture("ex4_7", 20, cfg.sampling())
        assert fx.evaluate(0.2, 0.6).to_list() == [[0.2, 0.6]]
        assert fx.evaluate(0.6, 0.2).to_list() == [[1.0, 1.0]]

    def test_ex4_1_quarter_disc(self, cfg):
        fx = build_fixture("ex4_1", 20, cfg.sampling())
        assert fx.evaluate(0.2, 0.6).to_list() == [[0.0, 0.0]]
        pts = fx.evaluate(0.6, 0.2).points
        assert np.linalg.norm(pts, axis=1).max() == pytest.approx(0.6)
