import numpy as np
import pytest

from domains import DomainGrid, Weights, lambda_grid, lattice_size
from fixtures import (
    Branch,
    FixtureError,
    PiecewiseRule,
    SetValuedFixture,
    diagonal_union,
    eval_fixture,
    sweep_nonempty,
    union_over_first,
    union_over_second,
)
from point_cloud import PointCloud
from value_sets import Ball, Interval, Sampling, ValueSetUnion, point, quarter_disc


class TestDomains:
    def test_interval_grid(self):
        grid = DomainGrid.interval(0.0, 1.0, 4)
        assert grid.points[:, 0].tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
        assert grid.shape == "interval"
        assert len(grid) == grid.expected_size()

    def test_simplex_lattice(self):
        grid = DomainGrid.simplex(3, 4)
        assert len(grid) == lattice_size(3, 4) == 15
        assert np.allclose(grid.points.sum(axis=1), 1.0)
        assert grid.contains(np.array([0.25, 0.25, 0.5]))
        assert not grid.contains(np.array([0.5, 0.5, 0.5]))

    def test_refined_grid_nests_the_coarse_one(self):
        coarse = DomainGrid.interval(0.0, 1.0, 5)
        fine = coarse.refined(2)
        assert all(fine.index_of(p) is not None for p in coarse.points)

    def test_offset_points_are_tagged(self):
        grid = DomainGrid.interval(0.0, 1.0, 8).with_offset_points(1 / np.sqrt(2))
        assert len(grid) == grid.expected_size() == 9 + 8
        assert int(grid.tags.sum()) == 8
        assert not grid.is_tagged(np.array([0.5]))

    def test_snap_only_within_tolerance(self):
        grid = DomainGrid.interval(0.0, 1.0, 10)
        assert grid.snap(np.array([0.3 + 1e-14]))[0] == grid.points[3, 0]
        assert grid.snap(np.array([0.33]))[0] == 0.33

    def test_bad_grids(self):
        with pytest.raises(ValueError):
            DomainGrid.interval(1.0, 0.0, 4)
        with pytest.raises(ValueError):
            DomainGrid.interval(0.0, 1.0, 0)

    def test_lambda_grid(self):
        assert lambda_grid(2, 3).tolist() == [[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]]
        assert lambda_grid(2, 3, open_interior=True).tolist() == [[0.5, 0.5]]
        assert lambda_grid(1, 5).tolist() == [[1.0]]

    def test_weights(self):
        w = Weights(np.array([0.25, 0.75]))
        assert w.combine(np.array([[0.0], [1.0]]))[0] == pytest.approx(0.75)
        with pytest.raises(ValueError):
            Weights(np.array([0.5, 0.6]))
        with pytest.raises(ValueError):
            Weights(np.array([-0.5, 1.5]))


class TestValueSets:
    def test_interval_describe_and_negate(self):
        value = Interval(1.0, 2.0, lo_open=True)
        assert value.describe() == "(1, 2]"
        assert value.negated().describe() == "[-2, -1)"
        assert not value.contains([1.0])
        assert value.contains([2.0])

    def test_empty_intervals(self):
        with pytest.raises(ValueError):
            Interval(1.0, 0.0)
        with pytest.raises(ValueError):
            Interval(1.0, 1.0, hi_open=True)

    def test_open_end_is_not_sampled(self):
        cloud = Interval(0.0, 1.0, lo_open=True).sample(Sampling(interval_points=5))
        assert cloud.points[:, 0].min() == pytest.approx(0.25)

    def test_quarter_disc_samples_stay_in_the_box(self):
        cloud = quarter_disc(0.5).sample(Sampling(disc_angles=16, disc_radii=5))
        assert np.all(cloud.points >= 0.0)
        assert np.all(np.linalg.norm(cloud.points, axis=1) <= 0.5 + 1e-12)
        assert cloud.contains_point([0.5, 0.0])

    def test_ball_negation(self):
        ball = Ball((0.0, 0.0), 1.0, (0.0, 0.0), (1.0, 1.0)).negated()
        assert ball.contains([-0.5, -0.5])
        assert not ball.contains([0.5, 0.5])

    def test_union_membership(self):
        union = ValueSetUnion([Interval(0.0, 1.0), Interval(2.0, 3.0, hi_open=True), point(5.0)])
        hits = union.contains_many(np.array([[0.5], [1.5], [3.0], [5.0]]), 1e-9)
        assert hits.tolist() == [True, False, False, True]


def _rule(*branches):
    return PiecewiseRule([Branch(str(i), when, value) for i, (when, value) in enumerate(branches)])


class TestSetValuedFixture:
    def test_evaluate_branch(self, make):
        fx, _ = make("ex3_1")
        cloud = eval_fixture(fx, 0.5, 0.2)
        assert cloud.points.min() == pytest.approx(-0.5)
        assert cloud.points.max() == pytest.approx(0.2)
        assert fx.value_set(0.2, 0.5).describe() == "[-1, 0.5]"

    def test_off_domain(self, make):
        fx, _ = make("ex3_1")
        with pytest.raises(FixtureError):
            eval_fixture(fx, 1.5, 0.2)

    def test_transposed_and_negated_views(self, make):
        fx, _ = make("ex3_1")
        assert fx.transposed().evaluate(0.2, 0.5) == fx.evaluate(0.5, 0.2)
        assert fx.negated().evaluate(0.5, 0.2) == fx.evaluate(0.5, 0.2).negated()
        assert fx.oriented("second", concave=True).evaluate(0.2, 0.5) == fx.evaluate(0.5, 0.2).negated()

    def test_unions(self, make):
        fx, _ = make("ex3_1")
        row = union_over_second(fx, 0.5)
        assert row.points.min() == pytest.approx(-1.0)
        assert row.points.max() == pytest.approx(1.0)
        column = union_over_first(fx, 0.0)
        # x <= 0 gives [-1, 0], 0 < x gives [-x, 0]
        assert column.points.min() == pytest.approx(-1.0)
        assert column.points.max() == pytest.approx(0.0)

    def test_diagonal(self, make):
        fx, _ = make("ex4_7")
        diag = diagonal_union(fx)
        assert len(diag) == len(fx.domain)
        assert np.allclose(diag.points[:, 0], diag.points[:, 1])

    def test_overlapping_branches(self):
        rule = _rule((lambda x, y: True, lambda x, y: point(0.0)), (lambda x, y: x < 0.5, lambda x, y: point(1.0)))
        fx = SetValuedFixture("overlap", DomainGrid.interval(0.0, 1.0, 4), 1, rule)
        assert fx.evaluate(0.75, 0.0) == PointCloud([[0.0]])
        with pytest.raises(FixtureError):
            fx.evaluate(0.25, 0.0)
        assert len(sweep_nonempty(fx)) == 2 * 5

    def test_single_valued_contract(self):
        rule = _rule((lambda x, y: True, lambda x, y: Interval(0.0, 1.0)))
        fx = SetValuedFixture("loose", DomainGrid.interval(0.0, 1.0, 4), 1, rule, single_valued=True)
        with pytest.raises(FixtureError):
            fx.evaluate(0.0, 0.0)

    def test_dimension_contract(self):
        rule = _rule((lambda x, y: True, lambda x, y: point(0.0, 0.0)))
        fx = SetValuedFixture("flat", DomainGrid.interval(0.0, 1.0, 4), 1, rule)
        with pytest.raises(FixtureError):
            fx.evaluate(0.0, 0.0)

    def test_empty_value_is_a_fixture_error(self):
        rule = _rule((lambda x, y: True, lambda x, y: Interval(y, x)))
        fx = SetValuedFixture("hollow", DomainGrid.interval(0.0, 1.0, 4), 1, rule)
        with pytest.raises(FixtureError):
            fx.evaluate(0.0, 1.0)
