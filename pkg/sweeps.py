"""
Quantifier enumeration and the inclusion tests shared by every checker.

A sweep is described by factors (a block of grid indices, either a sorted
combination of distinct indices or a free product). Small sweeps are
enumerated exhaustively; larger ones take every tuple of a coarse sub-grid
and fill up to the cap with seeded random draws.
"""
import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from cones import Cone, translate_violations
from config import ToleranceConfig
from extremal import ExtremalMode, extremal_points
from fixtures import SetValuedFixture
from point_cloud import ArrayLike, as_points
from verdicts import Argument, CheckError, Polarity, PropertyKind, Status, Verdict

logger = logging.getLogger(__name__)

Key = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class Factor:
    size: int
    arity: int = 1
    combination: bool = False

    def count(self, k: int) -> int:
        return math.comb(k, self.arity) if self.combination else k ** self.arity

    def items(self, indices: Sequence[int]) -> List[Tuple[int, ...]]:
        if self.combination:
            return list(itertools.combinations(indices, self.arity))
        return list(itertools.product(indices, repeat=self.arity))

    def draw(self, rng: np.random.Generator) -> Tuple[int, ...]:
        if self.combination:
            return tuple(sorted(int(i) for i in rng.choice(self.size, self.arity, replace=False)))
        return tuple(int(i) for i in rng.integers(self.size, size=self.arity))


def _coarse(size: int, stride: int) -> List[int]:
    return sorted(set(range(0, size, stride)) | {size - 1})


def enumerate_keys(factors: Sequence[Factor], cap: int, rng: np.random.Generator) -> List[Key]:
    total = math.prod(f.count(f.size) for f in factors)
    if total <= cap:
        return list(itertools.product(*[f.items(range(f.size)) for f in factors]))
    largest = max(f.size for f in factors)
    stride = 2
    while stride < largest:
        coarse = [_coarse(f.size, stride) for f in factors]
        if math.prod(f.count(len(idx)) for f, idx in zip(factors, coarse)) <= cap // 2:
            break
        stride += 1
    coarse = [_coarse(f.size, stride) for f in factors]
    keys = list(itertools.product(*[f.items(idx) for f, idx in zip(factors, coarse)]))
    seen = set(keys)
    attempts = 0
    while len(keys) < cap and attempts < 20 * cap:
        attempts += 1
        key = tuple(f.draw(rng) for f in factors)
        if key not in seen:
            seen.add(key)
            keys.append(key)
    logger.debug("sampled %d of %d tuples (coarse stride %d)", len(keys), total, stride)
    return keys


def spread_indices(n: int, cap: int) -> np.ndarray:
    """At most `cap` evenly spaced indices into range(n), both ends included."""
    if n <= cap:
        return np.arange(n)
    return np.unique(np.round(np.linspace(0, n - 1, cap)).astype(int))


def inclusion_violation(
    A: ArrayLike,
    B: ArrayLike,
    cone: Cone,
    sign: str,
    interior: bool = False,
    reduce_lhs: bool = True,
    reduce_rhs: bool = True,
) -> Optional[np.ndarray]:
    """
    First point of A outside B + S (sign "plus") or B - S (sign "minus"), or None.

    Either side may be cut down to its Min (plus) or Max (minus) points first;
    the inclusion is unchanged by that for finite sets, with S or int S.
    """
    mode = ExtremalMode.MIN if sign == "plus" else ExtremalMode.MAX
    if reduce_lhs:
        A = extremal_points(A, cone, mode)
    if reduce_rhs:
        B = extremal_points(B, cone, mode)
    idx = translate_violations(A, B, cone, sign, interior=interior)
    return as_points(A, cone.dim)[idx[0]] if idx.size else None


def hull_translate_contains(a: np.ndarray, base: ArrayLike, cone: Cone, sign: str) -> bool:
    """
    Exact test of a in co(base) + S (plus) or co(base) - S (minus).

    Feasibility of mu >= 0, sum mu = 1 with N(a - base^T mu) >= -eps (plus)
    or N(base^T mu - a) >= -eps (minus).
    """
    b = as_points(base, cone.dim)
    a = np.asarray(a, dtype=float).reshape(-1)
    nb = cone.normals @ b.T
    na = cone.normals @ a
    if sign == "plus":
        a_ub, b_ub = nb, na + cone.eps_cone
    else:
        a_ub, b_ub = -nb, -na + cone.eps_cone
    res = linprog(
        np.zeros(b.shape[0]),
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=np.ones((1, b.shape[0])),
        b_eq=[1.0],
        bounds=[(0.0, None)] * b.shape[0],
        method="highs",
    )
    return bool(res.status == 0)


def selection_product(candidates: Sequence[np.ndarray]) -> np.ndarray:
    idx = np.array(list(itertools.product(*[range(len(c)) for c in candidates])), dtype=int)
    return np.stack([c[idx[:, i]] for i, c in enumerate(candidates)], axis=1)


_RAW_CASE_KEYS = ("curve", "index")


def _as_case(case: Dict[str, Any]) -> Dict[str, Any]:
    out = {}
    for key, value in case.items():
        if key == "index":
            out[key] = int(value)
        elif key in _RAW_CASE_KEYS:
            out[key] = value
        else:
            out[key] = np.asarray(value, dtype=float)
    return out


class Sweep:
    """State shared by one checker run: the oriented fixture, the search budget and the coverage tally."""

    def __init__(
        self,
        kind: PropertyKind,
        fx: SetValuedFixture,
        cone: Cone,
        cfg: ToleranceConfig,
        arg: Argument = Argument.FIRST,
        polarity: Polarity = Polarity.CONVEX,
        options: Optional[Dict[str, Any]] = None,
    ):
        self.kind = kind
        self.source = fx
        self.arg = Argument(arg)
        self.polarity = Polarity(polarity)
        self.fx = fx.oriented(self.arg.value, self.polarity is Polarity.CONCAVE)
        self.cone = cone.with_tolerances(cfg.eps_cone, cfg.eps_interior)
        if self.cone.dim != fx.codomain_dim:
            raise CheckError(f"cone in R^{self.cone.dim} for {fx.name} with values in R^{fx.codomain_dim}")
        self.cfg = cfg
        self.options = dict(options or {})
        self.rng = np.random.default_rng(cfg.seed)
        self.coverage: Counter = Counter()

    @property
    def tol(self) -> float:
        return self.cone.eps_cone

    def lambdas(self, n: int, open_interior: bool = False) -> np.ndarray:
        explicit = self.options.get("lambdas")
        if explicit is not None:
            lam = np.atleast_2d(np.asarray(explicit, dtype=float))
            if lam.shape[1] == n:
                return lam
        lam = self.cfg.lambdas(n, open_interior=open_interior)
        if lam.shape[0] == 0:
            raise CheckError(f"lambda grid with {self.cfg.lambda_steps} steps has no interior point")
        return lam

    def keys(self, factors: Sequence[Factor]) -> List[Key]:
        return enumerate_keys(factors, self.cfg.max_tuples, self.rng)

    def case_lambdas(self, case: Dict[str, Any], n: int, open_interior: bool = False) -> np.ndarray:
        if "lambda" in case:
            return np.atleast_2d(case["lambda"])
        return self.lambdas(n, open_interior=open_interior)

    def explicit_cases(self) -> Optional[List[Dict[str, Any]]]:
        """Cases handed in by a caller or a replay; they replace the grid sweep."""
        cases = self.options.get("cases")
        if cases is None:
            return None
        return [_as_case(c) for c in cases]

    def explicit_tuples(self) -> Optional[List[np.ndarray]]:
        tuples = self.options.get("tuples")
        if tuples is None:
            return None
        return [np.asarray(t, dtype=float) for t in tuples]

    def as_x(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float).reshape(-1, self.fx.domain.dim)

    def slices(self) -> np.ndarray:
        if "slice" in self.options:
            return np.asarray(self.options["slice"], dtype=float).reshape(1, -1)
        ys = self.fx.second_domain.points
        return ys[:1] if self.fx.unary else ys

    def arities(self, start: int = 1) -> Iterable[int]:
        return range(start, self.cfg.n_max + 1)

    def candidates(self, x, y, choice=None) -> np.ndarray:
        if choice is not None:
            return np.asarray(choice, dtype=float).reshape(1, self.fx.codomain_dim)
        pts = self.fx.evaluate(x, y).points
        return pts[spread_indices(len(pts), self.cfg.selection_cap)]

    def value_out(self, points) -> np.ndarray:
        """Value points of the oriented view expressed in the coordinates of F."""
        pts = np.asarray(points, dtype=float)
        return -pts if self.polarity is Polarity.CONCAVE else pts

    def finish(self, status: Status, witness: Optional[Dict[str, Any]] = None, notes: Sequence[str] = ()) -> Verdict:
        verdict = Verdict(
            kind=self.kind,
            status=status,
            fixture=self.source.name,
            cone=self.cone.name,
            arg=self.arg,
            polarity=self.polarity,
            witness=witness,
            coverage={k: int(v) for k, v in self.coverage.items()},
            tolerance={"eps_cone": self.cone.eps_cone, "eps_interior": self.cone.eps_interior},
            options={k: v for k, v in self.options.items()},
            notes=list(notes),
        )
        logger.info("%s on %s (%s, %s): %s %s", self.kind.value, self.source.name, self.arg.value,
                    self.polarity.value, status.value, dict(self.coverage))
        if witness is not None:
            logger.debug("witness: %s", verdict.witness)
        return verdict
