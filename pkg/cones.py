"""
Polyhedral cones in halfspace form and the order relations they induce.

A cone S is {z : n_j . z >= 0 for all j}. Membership is tested with the
tolerance eps_cone and interior membership with the margin eps_interior, both
against unit-length normals.
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Union

import numpy as np
from scipy.optimize import linprog

from point_cloud import ArrayLike, PointCloud, as_points

logger = logging.getLogger(__name__)

EPS_CONE = 1e-9
EPS_INTERIOR = 1e-9

SIGNS = ("plus", "minus")


class ConeError(ValueError):
    """Rejected cone description or query."""


def _interior_witness(normals: np.ndarray) -> np.ndarray:
    # maximise t subject to N w >= t, -1 <= w <= 1
    m, d = normals.shape
    c = np.zeros(d + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-normals, np.ones((m, 1))])
    bounds = [(-1.0, 1.0)] * d + [(None, 1.0)]
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(m), bounds=bounds, method="highs")
    if not res.success or -res.fun <= 0:
        raise ConeError("cone has empty interior")
    return np.asarray(res.x[:d], dtype=float)


@dataclass(frozen=True, eq=False)
class Cone:
    normals: np.ndarray
    interior_witness: np.ndarray
    eps_cone: float = EPS_CONE
    eps_interior: float = EPS_INTERIOR
    name: str = ""

    @classmethod
    def from_normals(
        cls,
        normals: Sequence[Sequence[float]],
        eps_cone: float = EPS_CONE,
        eps_interior: float = EPS_INTERIOR,
        name: str = "",
    ) -> "Cone":
        arr = np.atleast_2d(np.asarray(normals, dtype=float))
        if arr.size == 0:
            raise ConeError("a cone needs at least one halfspace")
        norms = np.linalg.norm(arr, axis=1)
        if np.any(norms == 0):
            raise ConeError("zero normal vector")
        if eps_cone < 0 or eps_interior <= 0:
            raise ConeError("eps_cone must be nonnegative and eps_interior positive")
        arr = arr / norms[:, None]
        if np.linalg.matrix_rank(arr) < arr.shape[1]:
            raise ConeError("cone is not pointed: its normals do not span the space")
        witness = _interior_witness(arr)
        # scale so every normal clears the interior margin
        witness = witness * max(1.0, 2 * eps_interior / float((arr @ witness).min()))
        arr.flags.writeable = False
        witness.flags.writeable = False
        return cls(arr, witness, float(eps_cone), float(eps_interior), name or _describe(arr))

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @property
    def is_simplicial(self) -> bool:
        return self.normals.shape[0] == self.dim

    @property
    def key(self) -> tuple:
        return (self.normals.tobytes(), self.normals.shape, self.eps_cone, self.eps_interior)

    def negated(self) -> "Cone":
        name = self.name[5:] if self.name.startswith("minus") else "minus" + self.name
        return Cone.from_normals(-self.normals, self.eps_cone, self.eps_interior, name)

    def with_tolerances(self, eps_cone: float, eps_interior: float) -> "Cone":
        return Cone.from_normals(self.normals, eps_cone, eps_interior, self.name)

    def project(self, z: ArrayLike) -> np.ndarray:
        """Coordinates n_j . z for every point (shape (n, m))."""
        return as_points(z, self.dim) @ self.normals.T

    def contains_many(self, z: ArrayLike, interior: bool = False) -> np.ndarray:
        proj = self.project(z)
        if interior:
            return np.all(proj >= self.eps_interior, axis=1)
        return np.all(proj >= -self.eps_cone, axis=1)

    def contains(self, z: ArrayLike, interior: bool = False) -> bool:
        vec = np.atleast_1d(np.asarray(z, dtype=float))
        if vec.ndim != 1 or vec.shape[0] != self.dim:
            raise ConeError(f"point of dimension {vec.shape[-1]} tested against a cone in R^{self.dim}")
        return bool(self.contains_many(vec.reshape(1, -1), interior=interior)[0])

    def sample_pointedness(self, resolution: int = 64) -> bool:
        """True when no sampled unit direction z has both z and -z in the cone."""
        dirs = _sphere_directions(self.dim, resolution)
        both = self.contains_many(dirs) & self.contains_many(-dirs)
        return not bool(np.any(both))

    def describe(self) -> Dict:
        return {
            "name": self.name,
            "normals": self.normals.tolist(),
            "eps_cone": self.eps_cone,
            "eps_interior": self.eps_interior,
        }


def _describe(normals: np.ndarray) -> str:
    return ";".join(",".join(f"{v:g}" for v in row) for row in normals)


def _sphere_directions(dim: int, resolution: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        theta = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(resolution * dim, dim))
    coords = np.vstack([np.eye(dim), -np.eye(dim), pts])
    return coords / np.linalg.norm(coords, axis=1, keepdims=True)


RPLUS = Cone.from_normals([[1.0]], name="Rplus")
MINUS_RPLUS = Cone.from_normals([[-1.0]], name="minusRplus")
R2PLUS = Cone.from_normals([[1.0, 0.0], [0.0, 1.0]], name="R2plus")
MINUS_R2PLUS = Cone.from_normals([[-1.0, 0.0], [0.0, -1.0]], name="minusR2plus")

BUILTIN_CONES: Dict[str, Cone] = {c.name: c for c in (RPLUS, MINUS_RPLUS, R2PLUS, MINUS_R2PLUS)}


def parse_cone(spec: Union[str, Dict, Cone], eps_cone: float = None, eps_interior: float = None) -> Cone:
    """
    Build a cone from a name ("R2plus"), inline normals ("1,0;0,1"), a JSON
    object string or a dict with "normals" and optional tolerances.
    """
    if isinstance(spec, Cone):
        cone = spec
    elif isinstance(spec, dict):
        if "normals" not in spec:
            raise ConeError("cone object needs a 'normals' list")
        cone = Cone.from_normals(
            spec["normals"],
            spec.get("eps_cone", EPS_CONE),
            spec.get("eps_interior", EPS_INTERIOR),
            spec.get("name", ""),
        )
    else:
        text = str(spec).strip()
        if text in BUILTIN_CONES:
            cone = BUILTIN_CONES[text]
        elif text.startswith("{"):
            try:
                return parse_cone(json.loads(text), eps_cone, eps_interior)
            except json.JSONDecodeError as exc:
                raise ConeError(f"invalid cone JSON: {exc}") from exc
        else:
            try:
                rows = [[float(v) for v in row.split(",")] for row in text.split(";") if row.strip()]
            except ValueError as exc:
                raise ConeError(f"unknown cone '{text}'; use one of {sorted(BUILTIN_CONES)} or normals like '1,0;0,1'") from exc
            if not rows or len({len(r) for r in rows}) != 1:
                raise ConeError(f"malformed normal list '{text}'")
            cone = Cone.from_normals(rows)
    if eps_cone is not None or eps_interior is not None:
        cone = cone.with_tolerances(
            cone.eps_cone if eps_cone is None else eps_cone,
            cone.eps_interior if eps_interior is None else eps_interior,
        )
    return cone


def cone_contains(cone: Cone, z: ArrayLike, interior: bool = False) -> bool:
    return cone.contains(z, interior=interior)


def translate_violations(
    A: ArrayLike,
    B: ArrayLike,
    cone: Cone,
    sign: str,
    interior: bool = False,
    or_zero: bool = False,
) -> np.ndarray:
    """
    Indices of points a of A that are not in B + S (sign="plus") or B - S
    (sign="minus"). With `interior` the translate uses int S; `or_zero` also
    accepts a at distance <= eps_cone from some b (int S joined with {0}).
    """
    if sign not in SIGNS:
        raise ConeError(f"sign must be one of {SIGNS}")
    a = as_points(A, cone.dim)
    b = as_points(B, cone.dim)
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise ConeError("translate containment needs nonempty sets")
    pa = a @ cone.normals.T
    pb = b @ cone.normals.T
    covered = np.zeros(a.shape[0], dtype=bool)
    chunk = max(1, 2_000_000 // max(1, b.shape[0] * pb.shape[1]))
    for start in range(0, a.shape[0], chunk):
        stop = start + chunk
        # a in b + S  <=>  N(a - b) in the cone's projected orthant
        diff = pa[start:stop, None, :] - pb[None, :, :]
        if sign == "minus":
            diff = -diff
        if interior:
            ok = np.all(diff >= cone.eps_interior, axis=-1)
        else:
            ok = np.all(diff >= -cone.eps_cone, axis=-1)
        if or_zero:
            dist = np.linalg.norm(a[start:stop, None, :] - b[None, :, :], axis=-1)
            ok |= dist <= cone.eps_cone
        covered[start:stop] = ok.any(axis=1)
    return np.flatnonzero(~covered)


def subset_of_translate(
    A: ArrayLike, B: ArrayLike, cone: Cone, sign: str, interior: bool = False, or_zero: bool = False
) -> bool:
    return translate_violations(A, B, cone, sign, interior=interior, or_zero=or_zero).size == 0


@dataclass
class ConeRelation:
    """A stored order relation between points or sets, re-checkable on demand."""

    kind: str
    lhs: np.ndarray
    rhs: np.ndarray
    cone: Cone = field(repr=False)
    eps_cone: float = EPS_CONE

    KINDS = ("in_plus", "in_minus", "subset_plus", "subset_minus")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ConeError(f"unknown relation kind '{self.kind}'")
        self.lhs = as_points(self.lhs, self.cone.dim)
        self.rhs = as_points(self.rhs, self.cone.dim)

    def holds(self) -> bool:
        cone = self.cone.with_tolerances(self.eps_cone, self.cone.eps_interior)
        sign = "plus" if self.kind.endswith("plus") else "minus"
        return subset_of_translate(self.lhs, self.rhs, cone, sign)

    def violations(self) -> Optional[PointCloud]:
        sign = "plus" if self.kind.endswith("plus") else "minus"
        idx = translate_violations(self.lhs, self.rhs, self.cone, sign)
        return PointCloud(self.lhs[idx]) if idx.size else None

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "lhs": self.lhs.tolist(),
            "rhs": self.rhs.tolist(),
            "eps_cone": self.eps_cone,
        }
