"""
Built-in library of worked examples, auxiliary fixtures and the regression matrix.

Every builder takes the grid resolution and the value-set sampling and returns
a fresh SetValuedFixture. Branch conditions use the tolerant comparisons of
fixtures.py so that convex combinations landing on a breakpoint up to float
error still select exactly one branch.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List

import pandas as pd

from domains import DomainGrid
from fixtures import Branch, FixtureError, PiecewiseRule, SetValuedFixture, eq, le, lt
from g_curves import gate_curve
from value_sets import Ball, Interval, Sampling, half_disc, point, quarter_disc

logger = logging.getLogger(__name__)

IRRATIONAL_OFFSET = 1.0 / math.sqrt(2.0)


def _unit(resolution: int) -> DomainGrid:
    return DomainGrid.interval(0.0, 1.0, resolution)


def _upper_lower(upper: Callable, lower: Callable) -> PiecewiseRule:
    """The common two-branch split: x <= y versus y < x."""
    return PiecewiseRule([
        Branch("x<=y", lambda x, y: le(x, y), upper),
        Branch("y<x", lambda x, y: lt(y, x), lower),
    ])


def ex2_1(resolution: int, sampling: Sampling) -> SetValuedFixture:
    rule = PiecewiseRule([
        Branch("x<2", lambda x, y: lt(x, 2.0), lambda x, y: Interval(0.0, 2.0)),
        Branch("x=2", lambda x, y: eq(x, 2.0), lambda x, y: Interval(-2.0, 0.0)),
        Branch("x>2", lambda x, y: lt(2.0, x), lambda x, y: Interval(0.0, 2.0, lo_open=True)),
    ])
    grid = DomainGrid.interval(0.0, 4.0, resolution)
    return SetValuedFixture(
        "ex2_1", grid, 1, rule, sampling=sampling, unary=True,
        description="[0,2] on [0,2), [-2,0] at 2, (0,2] on (2,4]",
        witness_curves=[gate_curve(2.0)],
    )


def ex3_1(resolution: int, sampling: Sampling) -> SetValuedFixture:
    rule = _upper_lower(lambda x, y: Interval(-1.0, y), lambda x, y: Interval(-x, y))
    return SetValuedFixture("ex3_1", _unit(resolution), 1, rule, sampling=sampling,
                            description="[-1,y] if x<=y, [-x,y] if y<x")


def ex3_2(resolution: int, sampling: Sampling) -> SetValuedFixture:
    # (0 < x < 1, y = 0) is left open by the branch list; it joins the y < x branch
    rule = PiecewiseRule([
        Branch("x=1", lambda x, y: eq(x, 1.0), lambda x, y: Ball((0.0, 0.0), 1.0, (-1.0, -1.0), (1.0, 1.0))),
        Branch("0<x<=y", lambda x, y: lt(0.0, x) and lt(x, 1.0) and le(x, y), lambda x, y: half_disc(x, "right")),
        Branch("y<x<1", lambda x, y: lt(y, x) and lt(x, 1.0), lambda x, y: half_disc(x, "left")),
        Branch("x=0", lambda x, y: eq(x, 0.0), lambda x, y: point(0.0, 0.0)),
    ])
    return SetValuedFixture("ex3_2", _unit(resolution), 2, rule, sampling=sampling, default_cone="R2plus",
                            description="discs about the origin cut to the right (x<=y) or left (y<x) half")


def _zero_or_minus_x(name: str) -> Callable[[int, Sampling], SetValuedFixture]:
    def build(resolution: int, sampling: Sampling) -> SetValuedFixture:
        rule = _upper_lower(lambda x, y: Interval(0.0, y), lambda x, y: Interval(-x, y))
        return SetValuedFixture(name, _unit(resolution), 1, rule, sampling=sampling,
                                description="[0,y] if x<=y, [-x,y] if y<x")
    build.__name__ = name
    return build


ex3_3 = _zero_or_minus_x("ex3_3")
ex3_7 = _zero_or_minus_x("ex3_7")
ex3_8 = _zero_or_minus_x("ex3_8")
ex4_3 = _zero_or_minus_x("ex4_3")


def ex3_4(resolution: int, sampling: Sampling) -> SetValuedFixture:
    rule = _upper_lower(lambda x, y: point(1.0), lambda x, y: point(x))
    return SetValuedFixture("ex3_4", _unit(resolution), 1, rule, single_valued=True, sampling=sampling,
                            description="f = 1 if x<=y, x if y<x")


def _minus_one_or_minus_x(name: str) -> Callable[[int, Sampling], SetValuedFixture]:
    def build(resolution: int, sampling: Sampling) -> SetValuedFixture:
        rule = _upper_lower(lambda x, y: Interval(-1.0, 1.0), lambda x, y: Interval(-x, 1.0))
        return SetValuedFixture(name, _unit(resolution), 1, rule, sampling=sampling,
                                description="[-1,1] if x<=y, [-x,1] if y<x")
    build.__name__ = name
    return build


ex3_5 = _minus_one_or_minus_x("ex3_5")
ex4_2 = _minus_one_or_minus_x("ex4_2")


def ex3_6(resolution: int, sampling: Sampling) -> SetValuedFixture:
    grid = _unit(resolution)
    second = grid.with_offset_points(IRRATIONAL_OFFSET)

    def rational(x, y):
        return not second.is_tagged(y)

    rule = PiecewiseRule([
        Branch("rational y", rational, lambda x, y: Ball((0.0, y), x)),
        Branch("irrational y", lambda x, y: not rational(x, y), lambda x, y: Ball((y, 0.0), x)),
    ])
    return SetValuedFixture(
        "ex3_6", grid, 2, rule, sampling=sampling, default_cone="R2plus", second_domain=second,
        description="disc of radius x about (0,y) for rational y, about (y,0) on the irrational sub-grid",
    )


def rem4_2(resolution: int, sampling: Sampling) -> SetValuedFixture:
    def special(x, y):
        middle = le(0.25, x) and le(x, 0.75) and eq(y, 1.0)
        outer = (le(x, 0.25) or le(0.75, x)) and eq(y, 0.5)
        return middle or outer

    rule = PiecewiseRule([
        Branch("special", special, lambda x, y: Interval(0.0, 1.0)),
        Branch("otherwise", lambda x, y: not special(x, y), lambda x, y: point(0.0)),
    ])
    return SetValuedFixture("rem4_2", _unit(resolution), 1, rule, sampling=sampling,
                            description="[0,1] on [1/4,3/4]x{1} and ([0,1/4]u[3/4,1])x{1/2}, {0} elsewhere")


def ex4_1(resolution: int, sampling: Sampling) -> SetValuedFixture:
    rule = _upper_lower(lambda x, y: point(0.0, 0.0), lambda x, y: quarter_disc(x))
    return SetValuedFixture("ex4_1", _unit(resolution), 2, rule, sampling=sampling, default_cone="minusR2plus",
                            description="{(0,0)} if x<=y, quarter disc of radius x if y<x")


def _zero_x_or_unit(name: str) -> Callable[[int, Sampling], SetValuedFixture]:
    def build(resolution: int, sampling: Sampling) -> SetValuedFixture:
        rule = _upper_lower(lambda x, y: Interval(0.0, x), lambda x, y: Interval(0.0, 1.0))
        return SetValuedFixture(name, _unit(resolution), 1, rule, sampling=sampling,
                                description="[0,x] if x<=y, [0,1] if y<x")
    build.__name__ = name
    return build


ex4_4 = _zero_x_or_unit("ex4_4")
ex4_6 = _zero_x_or_unit("ex4_6")


def ex4_5(resolution: int, sampling: Sampling) -> SetValuedFixture:
    rule = _upper_lower(lambda x, y: point(x, y), lambda x, y: point(1.0, y))
    return SetValuedFixture("ex4_5", _unit(resolution), 2, rule, single_valued=True, sampling=sampling,
                            default_cone="R2plus", description="f = (x,y) if x<=y, (1,y) if y<x")


def ex4_7(resolution: int, sampling: Sampling) -> SetValuedFixture:
    rule = _upper_lower(lambda x, y: point(x, y), lambda x, y: point(1.0, 1.0))
    return SetValuedFixture("ex4_7", _unit(resolution), 2, rule, single_valued=True, sampling=sampling,
                            default_cone="R2plus", description="f = (x,y) if x<=y, (1,1) if y<x")


def const_A0(resolution: int, sampling: Sampling) -> SetValuedFixture:
    rule = PiecewiseRule([Branch("all", lambda x, y: True, lambda x, y: Interval(-0.5, 0.5))])
    return SetValuedFixture("const_A0", _unit(resolution), 1, rule, sampling=sampling,
                            description="constant [-1/2, 1/2]")


def const_disc(resolution: int, sampling: Sampling) -> SetValuedFixture:
    rule = PiecewiseRule([Branch("all", lambda x, y: True, lambda x, y: Ball((0.5, 0.5), 0.5))])
    return SetValuedFixture("const_disc", _unit(resolution), 2, rule, sampling=sampling, default_cone="R2plus",
                            description="constant disc of radius 1/2 about (1/2, 1/2)")


def diag_gap(resolution: int, sampling: Sampling) -> SetValuedFixture:
    rule = PiecewiseRule([
        Branch("x=y", lambda x, y: eq(x, y), lambda x, y: point(0.0)),
        Branch("x!=y", lambda x, y: not eq(x, y), lambda x, y: point(1.0)),
    ])
    return SetValuedFixture("diag_gap", _unit(resolution), 1, rule, single_valued=True, sampling=sampling,
                            description="{0} on the diagonal, {1} elsewhere")


def linear_x(resolution: int, sampling: Sampling) -> SetValuedFixture:
    rule = PiecewiseRule([Branch("all", lambda x, y: True, lambda x, y: point(x))])
    return SetValuedFixture("linear_x", _unit(resolution), 1, rule, single_valued=True, sampling=sampling,
                            description="f(x, y) = x")


BUILTIN_FIXTURES: Dict[str, Callable[[int, Sampling], SetValuedFixture]] = {
    f.__name__: f
    for f in (ex2_1, ex3_1, ex3_2, ex3_3, ex3_4, ex3_5, ex3_6, ex3_7, ex3_8,
              rem4_2, ex4_1, ex4_2, ex4_3, ex4_4, ex4_5, ex4_6, ex4_7)
}

AUXILIARY_FIXTURES: Dict[str, Callable[[int, Sampling], SetValuedFixture]] = {
    f.__name__: f for f in (const_A0, const_disc, diag_gap, linear_x)
}


def fixture_names(include_auxiliary: bool = False) -> List[str]:
    names = list(BUILTIN_FIXTURES)
    if include_auxiliary:
        names += list(AUXILIARY_FIXTURES)
    return names


def build_fixture(name: str, resolution: int = 50, sampling: Sampling = Sampling()) -> SetValuedFixture:
    builder = BUILTIN_FIXTURES.get(name) or AUXILIARY_FIXTURES.get(name)
    if builder is None:
        raise FixtureError(f"unknown fixture '{name}'; known: {', '.join(fixture_names(True))}")
    if name in ("ex2_1", "rem4_2") and resolution % 4:
        # breakpoints at 2 on [0, 4] and at 1/4, 1/2, 3/4 sit on the grid only for r divisible by 4
        logger.info("%s at resolution %d does not hold every breakpoint on the grid", name, resolution)
    return builder(resolution, sampling)


def fixture_catalog(include_auxiliary: bool = False, resolution: int = 50) -> pd.DataFrame:
    rows = []
    for name in fixture_names(include_auxiliary):
        fx = build_fixture(name, resolution)
        rows.append({
            "name": name,
            "domain": f"{fx.domain.shape} [{fx.domain.lower[0]:g}, {fx.domain.upper[0]:g}]",
            "grid_points": len(fx.domain),
            "codomain_dim": fx.codomain_dim,
            "single_valued": fx.single_valued,
            "unary": fx.unary,
            "default_cone": fx.default_cone,
            "builtin": name in BUILTIN_FIXTURES,
            "description": fx.description,
        })
    return pd.DataFrame(rows)


@dataclass(frozen=True)
class RegressionCase:
    fixture: str
    target: str
    expected: str
    action: str = "check"
    arg: str = "first"
    polarity: str = "convex"
    cone: str = ""
    options: tuple = ()
    source: str = ""

    @property
    def case_id(self) -> str:
        parts = [self.fixture, self.target]
        if self.action == "check":
            parts += [self.arg, self.polarity]
        return "/".join(parts)

    def options_dict(self) -> Dict:
        return dict(self.options)


# (1/15, 9/10), (1/4, 1/5) with x0 = 1/5 = 3/11 * 1/15 + 8/11 * 1/4
EX3_2_WITNESS = (((1.0 / 15.0, 0.9), (0.25, 0.2)),)
EX3_2_LAMBDA = ((3.0 / 11.0, 8.0 / 11.0),)

REGRESSION_MATRIX: List[RegressionCase] = [
    RegressionCase("ex2_1", "wcg", "Refuted", options=(("tuples", ((1.0, 3.0),)),),
                   source="no selection over (1, 3) keeps its segment in the graph"),
    RegressionCase("ex2_1", "wnq", "Confirmed", source="gate curve at level 2"),
    RegressionCase("ex3_1", "transfer_mu_v", "NotRefuted"),
    RegressionCase("ex3_1", "alpha", "Confirmed"),
    RegressionCase("ex3_2", "alpha", "NotConfirmed"),
    RegressionCase("ex3_2", "pair_properly_v", "Refuted"),
    RegressionCase("ex3_2", "pair_properly_v", "Refuted",
                   options=(("tuples", EX3_2_WITNESS), ("lambdas", EX3_2_LAMBDA)),
                   source="neither inclusion holds at x0 = 1/5"),
    RegressionCase("ex3_2", "transfer_mu_v", "NotRefuted"),
    RegressionCase("ex3_2", "transfer_properly_v", "Refuted"),
    RegressionCase("ex3_3", "transfer_weak_mu_v", "NotRefuted"),
    RegressionCase("ex3_4", "transfer_mu_scalar", "NotRefuted"),
    RegressionCase("ex3_5", "pair_properly_iii", "NotRefuted", arg="second", polarity="concave"),
    RegressionCase("ex3_6", "transfer_mu_v", "Refuted"),
    RegressionCase("ex3_6", "pair_properly_v", "NotRefuted"),
    RegressionCase("ex3_7", "naturally_qc_iii", "NotRefuted", polarity="concave"),
    RegressionCase("ex3_7", "transfer_properly_iii", "NotRefuted", polarity="concave"),
    RegressionCase("ex3_8", "gamma", "Confirmed"),
    RegressionCase("rem4_2", "transfer_properly_iii", "Refuted", polarity="concave"),
    RegressionCase("rem4_2", "gamma", "Confirmed"),
    RegressionCase("ex4_1", "alpha", "Confirmed"),
    RegressionCase("ex4_1", "naturally_qc_iii", "NotRefuted", polarity="concave"),
    RegressionCase("ex4_4", "weakly_z", "Confirmed", options=(("z_grid", 21),)),
    RegressionCase("ex4_5", "weakly_z", "Confirmed", options=(("z_grid", 6),)),
    RegressionCase("const_A0", "qc", "NotRefuted"),
    RegressionCase("const_A0", "wcg", "NotRefuted"),
    RegressionCase("linear_x", "wcg", "NotRefuted"),
    RegressionCase("ex4_1", "thm42_i", "consistent-with-theorem", action="verify"),
    RegressionCase("ex4_2", "cor41_i", "consistent-with-theorem", action="verify"),
    RegressionCase("ex4_2", "thm41_i", "consistent-with-theorem", action="verify"),
    RegressionCase("ex4_3", "cor43_i", "consistent-with-theorem", action="verify"),
    RegressionCase("ex4_6", "thm45", "consistent-with-theorem", action="verify"),
    RegressionCase("ex4_7", "cor44", "consistent-with-theorem", action="verify"),
    RegressionCase("diag_gap", "thm41_i", "no-certificate", action="conclusion"),
    RegressionCase("ex4_2", "max_w_side", "found", action="diagonal"),
    RegressionCase("rem4_2", "max_w_side", "absent", action="diagonal"),
]


def regression_table() -> pd.DataFrame:
    return pd.DataFrame([
        {
            "case": c.case_id,
            "action": c.action,
            "fixture": c.fixture,
            "target": c.target,
            "expected": c.expected,
            "source": c.source,
        }
        for c in REGRESSION_MATRIX
    ])
