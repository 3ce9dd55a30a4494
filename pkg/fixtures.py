"""
Discretized set-valued maps F : X x X => R^d.

A fixture couples a gridded domain with a closed-form piecewise rule. Grid
points and convex combinations of grid points are evaluated through the rule
itself; the returned value set is sampled into a PointCloud on demand.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from cones import Cone
from domains import SNAP_TOL, DomainGrid
from extremal import ExtremalMode, extremal_of_union, extremal_points
from point_cloud import PointCloud
from value_sets import PointValue, Sampling, ValueSet, ValueSetUnion

logger = logging.getLogger(__name__)

Coord = object  # float on one-dimensional domains, numpy vector otherwise


class FixtureError(ValueError):
    """Unknown fixture, off-domain query, empty value or ill-posed branch rule."""


def le(a: float, b: float) -> bool:
    return a <= b + SNAP_TOL


def lt(a: float, b: float) -> bool:
    return a < b - SNAP_TOL


def eq(a: float, b: float) -> bool:
    return abs(a - b) <= SNAP_TOL


@dataclass(frozen=True)
class Branch:
    label: str
    when: Callable[[Coord, Coord], bool]
    value: Callable[[Coord, Coord], ValueSet]


class PiecewiseRule:
    """Exactly one branch must fire at every queried point."""

    def __init__(self, branches: Sequence[Branch]):
        if not branches:
            raise FixtureError("a piecewise rule needs at least one branch")
        self.branches = tuple(branches)

    def active_branch(self, x: Coord, y: Coord) -> Branch:
        fired = [b for b in self.branches if b.when(x, y)]
        if len(fired) != 1:
            labels = [b.label for b in fired] or "none"
            raise FixtureError(f"branch conditions are not a partition at x={x}, y={y}: fired {labels}")
        return fired[0]

    def __call__(self, x: Coord, y: Coord) -> ValueSet:
        return self.active_branch(x, y).value(x, y)


def _key(v: np.ndarray) -> Tuple[float, ...]:
    return tuple(float(c) for c in np.round(v, 12) + 0.0)


def _coord(v: np.ndarray) -> Coord:
    return float(v[0]) if v.size == 1 else v


class SetValuedFixture:
    def __init__(
        self,
        name: str,
        domain: DomainGrid,
        codomain_dim: int,
        rule: Callable[[Coord, Coord], ValueSet],
        single_valued: bool = False,
        sampling: Sampling = Sampling(),
        description: str = "",
        unary: bool = False,
        default_cone: str = "Rplus",
        second_domain: Optional[DomainGrid] = None,
        witness_curves: Sequence = (),
        orientation: Tuple[bool, bool] = (False, False),
    ):
        self.name = name
        self.domain = domain
        self.second_domain = second_domain if second_domain is not None else domain
        self.codomain_dim = codomain_dim
        self.rule = rule
        self.single_valued = single_valued
        self.sampling = sampling
        self.description = description
        self.unary = unary
        self.default_cone = default_cone
        self.witness_curves = tuple(witness_curves)
        self.orientation = orientation  # (transposed, negated) relative to the rule
        self._values: Dict[tuple, ValueSet] = {}
        self._cache: Dict[tuple, object] = {}

    def __repr__(self) -> str:
        flags = []
        if self.orientation[0]:
            flags.append("transposed")
        if self.orientation[1]:
            flags.append("negated")
        suffix = f" [{', '.join(flags)}]" if flags else ""
        return f"SetValuedFixture({self.name}{suffix})"

    @property
    def is_square(self) -> bool:
        return self.domain is self.second_domain or (
            self.domain.shape == self.second_domain.shape
            and self.domain.points.shape == self.second_domain.points.shape
            and np.allclose(self.domain.points, self.second_domain.points)
        )

    def _view(self, transposed: bool, negated: bool) -> "SetValuedFixture":
        view = SetValuedFixture(
            self.name,
            self.second_domain if transposed else self.domain,
            self.codomain_dim,
            self.rule,
            self.single_valued,
            self.sampling,
            self.description,
            self.unary and not transposed,
            self.default_cone,
            self.domain if transposed else self.second_domain,
            self.witness_curves,
            (self.orientation[0] ^ transposed, self.orientation[1] ^ negated),
        )
        return view

    def transposed(self) -> "SetValuedFixture":
        """The map (x, y) -> F(y, x)."""
        return self._view(True, False)

    def negated(self) -> "SetValuedFixture":
        """The map (x, y) -> -F(x, y)."""
        return self._view(False, True)

    def oriented(self, arg: str = "first", concave: bool = False) -> "SetValuedFixture":
        fx = self.transposed() if arg == "second" else self
        return fx.negated() if concave else fx

    def _check_point(self, v, grid: DomainGrid, label: str) -> np.ndarray:
        v = np.atleast_1d(np.asarray(v, dtype=float))
        if not grid.contains(v):
            raise FixtureError(f"{label}={v.tolist()} lies outside the domain of {self.name}")
        return grid.snap(v)

    def value_set(self, x, y) -> ValueSet:
        x = self._check_point(x, self.domain, "x")
        y = self._check_point(y, self.second_domain, "y")
        key = (_key(x), _key(y))
        cached = self._values.get(key)
        if cached is not None:
            return cached
        transposed, negated = self.orientation
        a, b = (y, x) if transposed else (x, y)
        try:
            value = self.rule(_coord(a), _coord(b))
        except ValueError as exc:
            if isinstance(exc, FixtureError):
                raise
            raise FixtureError(f"{self.name} has no valid value at x={x.tolist()}, y={y.tolist()}: {exc}") from exc
        if value.dim != self.codomain_dim:
            raise FixtureError(f"{self.name} produced a value of dimension {value.dim}, expected {self.codomain_dim}")
        if self.single_valued and not isinstance(value, PointValue):
            raise FixtureError(f"{self.name} is declared single-valued but produced {value.describe()}")
        if negated:
            value = value.negated()
        self._values[key] = value
        return value

    def evaluate(self, x, y) -> PointCloud:
        return self.value_set(x, y).sample(self.sampling)

    def row_union(self, x) -> PointCloud:
        """F(x, X), the union over the second grid."""
        key = ("row", _key(np.atleast_1d(np.asarray(x, dtype=float))))
        if key not in self._cache:
            self._cache[key] = PointCloud.concat(
                [self.evaluate(x, y) for y in self.second_domain.points], eps=self.sampling.eps
            )
        return self._cache[key]

    def column_union(self, y) -> PointCloud:
        """F(X, y), the union over the first grid."""
        key = ("col", _key(np.atleast_1d(np.asarray(y, dtype=float))))
        if key not in self._cache:
            self._cache[key] = PointCloud.concat(
                [self.evaluate(x, y) for x in self.domain.points], eps=self.sampling.eps
            )
        return self._cache[key]

    def row_oracle(self, x) -> ValueSetUnion:
        """Exact membership in F(x, X)."""
        key = ("rowset", _key(np.atleast_1d(np.asarray(x, dtype=float))))
        if key not in self._cache:
            self._cache[key] = ValueSetUnion([self.value_set(x, y) for y in self.second_domain.points])
        return self._cache[key]

    def diagonal(self) -> PointCloud:
        if not self.is_square:
            raise FixtureError(f"{self.name} has different grids for its two arguments")
        key = ("diag",)
        if key not in self._cache:
            self._cache[key] = PointCloud.concat(
                [self.evaluate(x, x) for x in self.domain.points], eps=self.sampling.eps
            )
        return self._cache[key]

    def value_extremal(self, x, y, cone: Cone, mode: ExtremalMode) -> PointCloud:
        key = ("ext", _key(np.atleast_1d(np.asarray(x, dtype=float))),
               _key(np.atleast_1d(np.asarray(y, dtype=float))), cone.key, ExtremalMode(mode).value)
        if key not in self._cache:
            self._cache[key] = extremal_points(self.evaluate(x, y), cone, mode)
        return self._cache[key]

    def row_extremal(self, x, cone: Cone, mode: ExtremalMode) -> PointCloud:
        """Extremal points of F(x, X)."""
        mode = ExtremalMode(mode)
        key = ("rowext", _key(np.atleast_1d(np.asarray(x, dtype=float))), cone.key, mode.value)
        if key not in self._cache:
            self._cache[key] = extremal_of_union(
                [self.value_extremal(x, y, cone, mode) for y in self.second_domain.points], cone, mode
            )
        return self._cache[key]

    def describe(self) -> Dict:
        return {
            "name": self.name,
            "domain": self.domain.describe(),
            "codomain_dim": self.codomain_dim,
            "single_valued": self.single_valued,
            "unary": self.unary,
            "default_cone": self.default_cone,
            "description": self.description,
        }


def eval_fixture(fx: SetValuedFixture, x, y) -> PointCloud:
    return fx.evaluate(x, y)


def union_over_second(fx: SetValuedFixture, x) -> PointCloud:
    return fx.row_union(x)


def union_over_first(fx: SetValuedFixture, y) -> PointCloud:
    return fx.column_union(y)


def diagonal_union(fx: SetValuedFixture) -> PointCloud:
    return fx.diagonal()


def sweep_nonempty(fx: SetValuedFixture) -> List[Tuple[list, list]]:
    """Grid pairs at which the fixture fails to produce a value (empty when healthy)."""
    failures = []
    for x in fx.domain.points:
        for y in fx.second_domain.points:
            try:
                fx.evaluate(x, y)
            except FixtureError as exc:
                logger.debug("fixture %s failed at (%s, %s): %s", fx.name, x, y, exc)
                failures.append((x.tolist(), y.tolist()))
    return failures
