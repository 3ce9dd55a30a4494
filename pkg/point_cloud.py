"""Finite point sets standing in for compact sets and sampled values F(x, y)."""
import logging
import math
from typing import Iterable, List, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

logger = logging.getLogger(__name__)

DEFAULT_EPS = 1e-9

ArrayLike = Union["PointCloud", np.ndarray, Sequence]


def _dedup_decimals(eps: float) -> int:
    if eps <= 0:
        return 15
    return int(min(15, max(0, round(-math.log10(eps)))))


def as_points(data: ArrayLike, dim: int = None) -> np.ndarray:
    """Coerce a cloud, an array or nested lists to a float array of shape (n, d)."""
    if isinstance(data, PointCloud):
        return data.points
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        # a flat list is a list of scalars unless a dimension says otherwise
        arr = arr.reshape(1, -1) if dim is not None and dim > 1 else arr.reshape(-1, 1)
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got {arr.shape[1]}")
    return arr


class PointCloud:
    """
    Nonempty finite set of points in R^d.

    Points closer than the dedup tolerance collapse to one representative and
    the stored order is lexicographic, so two clouds built from the same
    points in any order (or with repeats) compare equal and iterate alike.
    """

    __slots__ = ("_points", "eps")

    def __init__(self, points: ArrayLike, eps: float = DEFAULT_EPS, dedup: bool = True):
        arr = as_points(points)
        if arr.shape[0] == 0:
            raise ValueError("a point cloud needs at least one point")
        if not np.all(np.isfinite(arr)):
            raise ValueError("point cloud contains non-finite coordinates")
        if dedup:
            keys = np.round(arr, _dedup_decimals(eps)) + 0.0  # folds -0.0 into 0.0
            _, first = np.unique(keys, axis=0, return_index=True)
            arr = arr[first]
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        self._points = arr
        self.eps = eps

    @classmethod
    def concat(cls, clouds: Iterable["PointCloud"], eps: float = DEFAULT_EPS) -> "PointCloud":
        parts = [as_points(c) for c in clouds]
        if not parts:
            raise ValueError("cannot take the union of no clouds")
        return cls(np.vstack(parts), eps=eps)

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def dim(self) -> int:
        return self._points.shape[1]

    def __len__(self) -> int:
        return self._points.shape[0]

    def __iter__(self):
        return iter(self._points)

    def __repr__(self) -> str:
        if len(self) <= 4:
            return f"PointCloud({self.to_list()})"
        return f"PointCloud(n={len(self)}, dim={self.dim})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        if self.dim != other.dim or len(self) != len(other):
            return False
        return self.issubset(other) and other.issubset(self)

    __hash__ = None

    def union(self, *others: "PointCloud") -> "PointCloud":
        return PointCloud.concat((self,) + others, eps=self.eps)

    def negated(self) -> "PointCloud":
        return PointCloud(-self._points, eps=self.eps)

    def distances_to(self, p: ArrayLike) -> np.ndarray:
        q = as_points(p, self.dim)[0]
        return np.linalg.norm(self._points - q, axis=1)

    def contains_point(self, p: ArrayLike, tol: float = None) -> bool:
        tol = self.eps if tol is None else tol
        return bool(self.distances_to(p).min() <= tol)

    def nearest_distances(self, other: "PointCloud") -> np.ndarray:
        """Distance from each point of this cloud to the closest point of `other`."""
        dist, _ = cKDTree(other.points).query(self._points)
        return np.asarray(dist, dtype=float)

    def issubset(self, other: "PointCloud", tol: float = None) -> bool:
        tol = max(self.eps, other.eps) if tol is None else tol
        return bool(np.all(self.nearest_distances(other) <= tol))

    def min_distance(self, other: "PointCloud") -> float:
        return float(self.nearest_distances(other).min())

    def meets(self, other: "PointCloud", tol: float = None) -> bool:
        tol = max(self.eps, other.eps) if tol is None else tol
        return self.min_distance(other) <= tol

    def to_list(self) -> List[List[float]]:
        return [[float(v) for v in row] for row in self._points]
