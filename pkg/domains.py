"""Gridded domains X (intervals, boxes, simplices) and weight vectors on simplices."""
import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

SNAP_TOL = 1e-12
SHAPES = ("interval", "box", "simplex")


@lru_cache(maxsize=None)
def simplex_lattice(n: int, resolution: int) -> np.ndarray:
    """Barycentric lattice {k / resolution : sum k = resolution} on the (n-1)-simplex."""
    if n < 1 or resolution < 1:
        raise ValueError("simplex lattice needs n >= 1 and a positive resolution")
    rows = []
    for bars in itertools.combinations(range(resolution + n - 1), n - 1):
        counts = []
        prev = -1
        for b in bars:
            counts.append(b - prev - 1)
            prev = b
        counts.append(resolution + n - 2 - prev)
        rows.append(counts)
    lattice = np.asarray(rows, dtype=float) / resolution
    lattice.flags.writeable = False
    return lattice


def lattice_size(n: int, resolution: int) -> int:
    return math.comb(resolution + n - 1, n - 1)


@dataclass(frozen=True, eq=False)
class DomainGrid:
    shape: str
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    resolution: int
    points: np.ndarray = field(repr=False)
    tags: Optional[np.ndarray] = field(default=None, repr=False)
    offset: Optional[float] = None

    @classmethod
    def interval(cls, a: float, b: float, resolution: int) -> "DomainGrid":
        return cls.box([a], [b], resolution, shape="interval")

    @classmethod
    def box(cls, lower: Sequence[float], upper: Sequence[float], resolution: int, shape: str = "box") -> "DomainGrid":
        if resolution < 1:
            raise ValueError("grid resolution must be positive")
        lower = tuple(float(v) for v in lower)
        upper = tuple(float(v) for v in upper)
        if len(lower) != len(upper) or any(lo > hi for lo, hi in zip(lower, upper)):
            raise ValueError("box bounds must have equal length with lower <= upper")
        # k/r first so nested grids share the exact floats
        steps = np.arange(resolution + 1) / resolution
        axes = [lo + (hi - lo) * steps for lo, hi in zip(lower, upper)]
        pts = np.array(list(itertools.product(*axes)), dtype=float)
        pts.flags.writeable = False
        return cls(shape, lower, upper, resolution, pts)

    @classmethod
    def simplex(cls, n: int, resolution: int) -> "DomainGrid":
        pts = simplex_lattice(n, resolution)
        return cls("simplex", (0.0,) * n, (1.0,) * n, resolution, pts)

    def with_offset_points(self, offset: float) -> "DomainGrid":
        """
        Add the points frac(k/r + offset), k = 0..r-1, of a [0, 1] interval grid
        as a tagged sub-grid.
        """
        if self.shape != "interval" or self.lower != (0.0,) or self.upper != (1.0,):
            raise ValueError("offset sub-grids are defined on the unit interval only")
        extra = np.mod(np.arange(self.resolution) / self.resolution + offset, 1.0)
        pts = np.concatenate([self.points[:, 0], extra])
        tags = np.concatenate([np.zeros(len(self.points), dtype=bool), np.ones(len(extra), dtype=bool)])
        order = np.argsort(pts, kind="stable")
        pts = pts[order].reshape(-1, 1)
        tags = tags[order]
        pts.flags.writeable = False
        tags.flags.writeable = False
        return DomainGrid(self.shape, self.lower, self.upper, self.resolution, pts, tags, float(offset))

    def refined(self, factor: int = 2) -> "DomainGrid":
        if self.shape == "simplex":
            finer = DomainGrid.simplex(self.dim, self.resolution * factor)
        else:
            finer = DomainGrid.box(self.lower, self.upper, self.resolution * factor, shape=self.shape)
        if self.offset is not None:
            finer = finer.with_offset_points(self.offset)
        return finer

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def expected_size(self) -> int:
        if self.shape == "simplex":
            base = lattice_size(self.dim, self.resolution)
        else:
            base = (self.resolution + 1) ** self.dim
        return base + (self.resolution if self.tags is not None else 0)

    def contains(self, x: np.ndarray, tol: float = SNAP_TOL) -> bool:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.dim,):
            return False
        if self.shape == "simplex":
            return bool(np.all(x >= -tol) and abs(x.sum() - 1.0) <= max(tol, 1e-9))
        lo = np.asarray(self.lower)
        hi = np.asarray(self.upper)
        return bool(np.all(x >= lo - tol) and np.all(x <= hi + tol))

    def snap(self, x: np.ndarray) -> np.ndarray:
        """Nearest grid point when within SNAP_TOL, otherwise x itself."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        dist = np.abs(self.points - x).max(axis=1)
        k = int(dist.argmin())
        return self.points[k] if dist[k] <= SNAP_TOL else x

    def index_of(self, x: np.ndarray) -> Optional[int]:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        dist = np.abs(self.points - x).max(axis=1)
        k = int(dist.argmin())
        return k if dist[k] <= SNAP_TOL else None

    def is_tagged(self, x: np.ndarray) -> bool:
        if self.tags is None:
            return False
        k = self.index_of(x)
        return k is not None and bool(self.tags[k])

    def describe(self) -> dict:
        return {
            "shape": self.shape,
            "lower": list(self.lower),
            "upper": list(self.upper),
            "resolution": self.resolution,
            "points": len(self),
        }


@dataclass(frozen=True, eq=False)
class Weights:
    """A weight vector lambda on the (n-1)-simplex."""

    lam: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        if lam.ndim != 1 or lam.size == 0:
            raise ValueError("weights must be a nonempty vector")
        if np.any(lam < -1e-9) or abs(lam.sum() - 1.0) > 1e-9:
            raise ValueError(f"weights {lam.tolist()} are not on the simplex")
        object.__setattr__(self, "lam", lam)

    @property
    def n(self) -> int:
        return self.lam.size

    def combine(self, points: np.ndarray) -> np.ndarray:
        return self.lam @ np.asarray(points, dtype=float)


def lambda_grid(n: int, steps: int, open_interior: bool = False) -> np.ndarray:
    """Weights on the (n-1)-simplex with `steps` points per coordinate."""
    if n == 1:
        return np.ones((1, 1))
    lam = simplex_lattice(n, max(1, steps - 1))
    if open_interior:
        lam = lam[np.all(lam > 0, axis=1)]
    return lam
