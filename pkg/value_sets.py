"""
Closed-form value sets of the worked examples.

Each value set knows its exact membership test (used for selections and for
meeting extremal sets) and how to sample itself into a PointCloud (used for
every inclusion test).
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np

from point_cloud import PointCloud, as_points

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Sampling:
    interval_points: int = 101
    disc_angles: int = 32
    disc_radii: int = 16
    eps: float = 1e-9


class ValueSet:
    """Base class; subclasses are frozen dataclasses and therefore hashable."""

    dim: int = 1

    def contains_many(self, points: np.ndarray, tol: float) -> np.ndarray:
        raise NotImplementedError

    def contains(self, point, tol: float = 1e-9) -> bool:
        return bool(self.contains_many(as_points(point, self.dim), tol)[0])

    def negated(self) -> "ValueSet":
        raise NotImplementedError

    def _sample(self, sampling: Sampling) -> np.ndarray:
        raise NotImplementedError

    def sample(self, sampling: Sampling) -> PointCloud:
        return _cached_sample(self, sampling)

    def describe(self) -> str:
        raise NotImplementedError


@lru_cache(maxsize=65536)
def _cached_sample(value: ValueSet, sampling: Sampling) -> PointCloud:
    pts = value._sample(sampling)
    if pts.shape[0] == 0:
        raise ValueError(f"value set {value.describe()} is empty")
    return PointCloud(pts, eps=sampling.eps)


@dataclass(frozen=True)
class Interval(ValueSet):
    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    dim = 1

    def __post_init__(self):
        if self.lo > self.hi or (self.lo == self.hi and (self.lo_open or self.hi_open)):
            raise ValueError(f"empty interval {self.describe()}")

    def contains_many(self, points, tol):
        v = np.asarray(points, dtype=float)[:, 0]
        low = v > self.lo + tol if self.lo_open else v >= self.lo - tol
        high = v < self.hi - tol if self.hi_open else v <= self.hi + tol
        return low & high

    def negated(self):
        return Interval(-self.hi, -self.lo, self.hi_open, self.lo_open)

    def _sample(self, sampling):
        if self.lo == self.hi:
            return np.array([[self.lo]])
        grid = np.linspace(self.lo, self.hi, sampling.interval_points)
        if self.lo_open:
            grid = grid[1:]
        if self.hi_open:
            grid = grid[:-1]
        return grid.reshape(-1, 1)

    def describe(self):
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


@dataclass(frozen=True)
class PointValue(ValueSet):
    coords: Tuple[float, ...]

    @property
    def dim(self):
        return len(self.coords)

    def contains_many(self, points, tol):
        diff = np.asarray(points, dtype=float) - np.asarray(self.coords)
        return np.linalg.norm(diff, axis=1) <= tol

    def negated(self):
        return PointValue(tuple(-c for c in self.coords))

    def _sample(self, sampling):
        return np.asarray(self.coords, dtype=float).reshape(1, -1)

    def describe(self):
        return "{(" + ", ".join(f"{c:g}" for c in self.coords) + ")}"


@dataclass(frozen=True)
class Ball(ValueSet):
    """Closed disc in R^2 intersected with an optional axis-aligned box."""

    center: Tuple[float, float]
    radius: float
    lower: Optional[Tuple[float, float]] = None
    upper: Optional[Tuple[float, float]] = None

    dim = 2

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("disc radius must be nonnegative")

    def contains_many(self, points, tol):
        pts = np.asarray(points, dtype=float)
        inside = np.linalg.norm(pts - np.asarray(self.center), axis=1) <= self.radius + tol
        if self.lower is not None:
            inside &= np.all(pts >= np.asarray(self.lower) - tol, axis=1)
        if self.upper is not None:
            inside &= np.all(pts <= np.asarray(self.upper) + tol, axis=1)
        return inside

    def negated(self):
        lower = None if self.upper is None else tuple(-v for v in self.upper)
        upper = None if self.lower is None else tuple(-v for v in self.lower)
        return Ball(tuple(-c for c in self.center), self.radius, lower, upper)

    def _sample(self, sampling):
        theta = np.linspace(0.0, 2 * np.pi, sampling.disc_angles, endpoint=False)
        radii = np.linspace(0.0, self.radius, sampling.disc_radii)
        rr, tt = np.meshgrid(radii, theta, indexing="ij")
        pts = np.column_stack([(rr * np.cos(tt)).ravel(), (rr * np.sin(tt)).ravel()])
        pts = pts + np.asarray(self.center)
        # axis-aligned cuts keep boundary samples whose cosines round past zero
        keep = np.ones(len(pts), dtype=bool)
        if self.lower is not None:
            keep &= np.all(pts >= np.asarray(self.lower) - 1e-12, axis=1)
        if self.upper is not None:
            keep &= np.all(pts <= np.asarray(self.upper) + 1e-12, axis=1)
        pts = pts[keep]
        if self.lower is not None:
            pts = np.maximum(pts, np.asarray(self.lower))
        if self.upper is not None:
            pts = np.minimum(pts, np.asarray(self.upper))
        return pts

    def describe(self):
        text = f"disc(({self.center[0]:g}, {self.center[1]:g}), {self.radius:g})"
        if self.lower is not None or self.upper is not None:
            text += f" within {self.lower}..{self.upper}"
        return text


class ValueSetUnion:
    """
    Exact membership in a finite union of value sets.

    Members are grouped by type so one broadcast per group answers a whole
    batch of points.
    """

    def __init__(self, values: Sequence[ValueSet]):
        values = list(values)
        if not values:
            raise ValueError("a union needs at least one value set")
        self.dim = values[0].dim
        intervals = [v for v in values if isinstance(v, Interval)]
        balls = [v for v in values if isinstance(v, Ball)]
        singles = [v for v in values if isinstance(v, PointValue)]
        self._others = [v for v in values if not isinstance(v, (Interval, Ball, PointValue))]
        self._intervals = None
        if intervals:
            self._intervals = tuple(
                np.array([getattr(v, f) for v in intervals])
                for f in ("lo", "hi", "lo_open", "hi_open")
            )
        self._balls = None
        if balls:
            inf = np.full(2, np.inf)
            self._balls = (
                np.array([v.center for v in balls], dtype=float),
                np.array([v.radius for v in balls], dtype=float),
                np.array([v.lower if v.lower is not None else -inf for v in balls], dtype=float),
                np.array([v.upper if v.upper is not None else inf for v in balls], dtype=float),
            )
        self._singles = np.array([v.coords for v in singles], dtype=float) if singles else None

    def contains_many(self, points: np.ndarray, tol: float) -> np.ndarray:
        pts = as_points(points, self.dim)
        hit = np.zeros(len(pts), dtype=bool)
        if self._intervals is not None:
            lo, hi, lo_open, hi_open = self._intervals
            v = pts[:, :1]
            low = np.where(lo_open, v > lo + tol, v >= lo - tol)
            high = np.where(hi_open, v < hi - tol, v <= hi + tol)
            hit |= np.any(low & high, axis=1)
        if self._balls is not None:
            center, radius, lower, upper = self._balls
            inside = np.linalg.norm(pts[:, None, :] - center[None], axis=-1) <= radius + tol
            inside &= np.all(pts[:, None, :] >= lower[None] - tol, axis=-1)
            inside &= np.all(pts[:, None, :] <= upper[None] + tol, axis=-1)
            hit |= inside.any(axis=1)
        if self._singles is not None:
            dist = np.linalg.norm(pts[:, None, :] - self._singles[None], axis=-1)
            hit |= np.any(dist <= tol, axis=1)
        for value in self._others:
            hit |= value.contains_many(pts, tol)
        return hit


def quarter_disc(radius: float) -> Ball:
    """{(u, v) in [0, 1]^2 : u^2 + v^2 <= radius^2}."""
    return Ball((0.0, 0.0), radius, (0.0, 0.0), (1.0, 1.0))


def half_disc(radius: float, side: str) -> Ball:
    """Disc about the origin clipped to u >= 0 (side "right") or u <= 0 (side "left")."""
    if side == "right":
        return Ball((0.0, 0.0), radius, (0.0, -1.0), (1.0, 1.0))
    if side == "left":
        return Ball((0.0, 0.0), radius, (-1.0, -1.0), (0.0, 1.0))
    raise ValueError(f"unknown half-disc side '{side}'")


def point(*coords: float) -> PointValue:
    return PointValue(tuple(float(c) for c in coords))
