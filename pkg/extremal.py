"""Minimal, maximal and weakly extremal points of finite sets under a cone order."""
import logging
from enum import Enum
from typing import Dict, Iterable

import numpy as np

from cones import Cone, ConeError, subset_of_translate
from point_cloud import ArrayLike, PointCloud

logger = logging.getLogger(__name__)

_CHUNK_BUDGET = 4_000_000


class ExtremalMode(str, Enum):
    MIN = "min"
    MIN_W = "min_w"
    MAX = "max"
    MAX_W = "max_w"

    @property
    def weak(self) -> bool:
        return self in (ExtremalMode.MIN_W, ExtremalMode.MAX_W)

    @property
    def upper(self) -> bool:
        return self in (ExtremalMode.MAX, ExtremalMode.MAX_W)

    def mirrored(self) -> "ExtremalMode":
        return {
            ExtremalMode.MIN: ExtremalMode.MAX,
            ExtremalMode.MAX: ExtremalMode.MIN,
            ExtremalMode.MIN_W: ExtremalMode.MAX_W,
            ExtremalMode.MAX_W: ExtremalMode.MIN_W,
        }[self]


def _survivors(proj: np.ndarray, cone: Cone, weak: bool) -> np.ndarray:
    """
    Boolean mask of points not dominated from above in projected coordinates.

    `proj` holds N z per row, so a in z + S is proj[a] - proj[z] >= -eps
    componentwise. Points that dominate each other within tolerance are the
    same point up to eps; the earlier one (lexicographic order) is kept.
    """
    n = proj.shape[0]
    keep = np.ones(n, dtype=bool)
    idx = np.arange(n)
    chunk = max(1, _CHUNK_BUDGET // max(1, n * proj.shape[1]))
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        diff = proj[None, :, :] - proj[start:stop, None, :]  # (chunk, n, m): a - z
        if weak:
            dominated = np.all(diff >= cone.eps_interior, axis=-1)
        else:
            above = np.all(diff >= -cone.eps_cone, axis=-1)
            below = np.all(diff <= cone.eps_cone, axis=-1)
            earlier = idx[None, :] < idx[start:stop, None]
            dominated = above & (~below | earlier)
            dominated[np.arange(stop - start), np.arange(start, stop)] = False
        keep[start:stop] = ~dominated.any(axis=1)
    return keep


def extremal_points(A: ArrayLike, cone: Cone, mode) -> PointCloud:
    """
    Extremal points of A under the order of `cone`.

    min:   no other a in A with a in z - S
    min_w: no a in A with a in z - int S
    max, max_w mirror these with +S and +int S.
    """
    mode = ExtremalMode(mode)
    cloud = A if isinstance(A, PointCloud) else PointCloud(A, eps=cone.eps_cone)
    if cloud.dim != cone.dim:
        raise ConeError(f"cloud of dimension {cloud.dim} under a cone in R^{cone.dim}")
    proj = cloud.points @ cone.normals.T
    if not mode.upper:
        proj = -proj
    keep = _survivors(proj, cone, mode.weak)
    return PointCloud(cloud.points[keep], eps=cloud.eps)


def extremal_of_union(clouds: Iterable[ArrayLike], cone: Cone, mode) -> PointCloud:
    """
    Extremal points of a union, reduced piecewise first.

    A point extremal in the union is extremal in its own piece, and anything
    dominating it can be replaced by an extremal point of its piece, so the
    two-stage filter returns the same set as a scan over the full union.
    """
    mode = ExtremalMode(mode)
    pieces = [extremal_points(c, cone, mode) for c in clouds]
    if not pieces:
        raise ConeError("cannot take extremal points of an empty union")
    return extremal_points(PointCloud.concat(pieces, eps=cone.eps_cone), cone, mode)


def check_lemma21(A: ArrayLike, cone: Cone) -> Dict[str, bool]:
    cloud = A if isinstance(A, PointCloud) else PointCloud(A, eps=cone.eps_cone)
    lo = extremal_points(cloud, cone, ExtremalMode.MIN)
    lo_w = extremal_points(cloud, cone, ExtremalMode.MIN_W)
    hi = extremal_points(cloud, cone, ExtremalMode.MAX)
    hi_w = extremal_points(cloud, cone, ExtremalMode.MAX_W)
    return {
        "min_nonempty": len(lo) > 0,
        "covered_by_min_plus_cone": subset_of_translate(cloud, lo, cone, "plus"),
        "covered_by_weak_min_plus_interior": subset_of_translate(
            cloud, lo_w, cone, "plus", interior=True, or_zero=True
        ),
        "max_nonempty": len(hi) > 0,
        "covered_by_max_minus_cone": subset_of_translate(cloud, hi, cone, "minus"),
        "covered_by_weak_max_minus_interior": subset_of_translate(
            cloud, hi_w, cone, "minus", interior=True, or_zero=True
        ),
    }


def convex_combination_samples(A: ArrayLike, coeff_steps: int) -> PointCloud:
    if coeff_steps <= 0:
        raise ValueError("coeff_steps must be a positive integer")
    cloud = A if isinstance(A, PointCloud) else PointCloud(A)
    pts = cloud.points
    t = np.arange(coeff_steps + 1) / coeff_steps
    i, j = np.triu_indices(len(pts))
    a, b = pts[i], pts[j]
    combos = t[:, None, None] * a[None, :, :] + (1.0 - t)[:, None, None] * b[None, :, :]
    return PointCloud(combos.reshape(-1, cloud.dim), eps=cloud.eps)


def hull_samples(A: ArrayLike, cone: Cone, coeff_steps: int, side: str) -> PointCloud:
    """
    Sampled hull of A restricted to what matters for a translate test.

    co(A) is inside B + S exactly when co(Min A) is, and inside B - S exactly
    when co(Max A) is, so only the relevant extremal points are combined. On
    the line the hull is the segment between the two extreme points.
    """
    cloud = A if isinstance(A, PointCloud) else PointCloud(A, eps=cone.eps_cone)
    mode = ExtremalMode.MIN if side == "plus" else ExtremalMode.MAX
    if cloud.dim == 1:
        pts = cloud.points[:, 0]
        base = PointCloud(np.array([[pts.min()], [pts.max()]]), eps=cloud.eps)
    else:
        base = extremal_points(cloud, cone, mode)
    return convex_combination_samples(base, coeff_steps)

