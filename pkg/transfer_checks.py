"""
Two-argument kinds: transfer mu-convexity, pair and transfer proper
quasi-convexity, and the conditions alpha and gamma.

All checks run on the oriented view of the fixture held by the Sweep, so the
first argument is the one being combined and values are already negated for
concave polarity.
"""
import logging
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np

from cones import Cone, translate_violations
from extremal import ExtremalMode, extremal_points
from fixtures import FixtureError, SetValuedFixture
from point_cloud import PointCloud
from sweeps import Factor, Sweep, inclusion_violation
from verdicts import CheckError, PropertyKind, Status, Verdict

logger = logging.getLogger(__name__)

TRANSFER_MU_KINDS = frozenset({
    PropertyKind.TRANSFER_MU_V,
    PropertyKind.TRANSFER_MU_III,
    PropertyKind.TRANSFER_WEAK_MU_V,
    PropertyKind.TRANSFER_WEAK_MU_III,
    PropertyKind.TRANSFER_MU_SCALAR,
})

PAIR_KINDS = frozenset({
    PropertyKind.PAIR_PROPERLY_III,
    PropertyKind.PAIR_PROPERLY_V,
    PropertyKind.PAIR_PROPERLY_PLAIN,
    PropertyKind.PAIR_PROPERLY_SCALAR,
})

TRANSFER_PROPERLY_KINDS = frozenset({PropertyKind.TRANSFER_PROPERLY_III, PropertyKind.TRANSFER_PROPERLY_V})


def _meets(fx: SetValuedFixture, x, z, points: np.ndarray, tol: float) -> bool:
    return bool(fx.value_set(x, z).contains_many(points, tol).any())


def _meets_row_weak_max(sw: Sweep, x, z) -> bool:
    return _meets(sw.fx, x, z, sw.fx.row_extremal(x, sw.cone, ExtremalMode.MAX_W).points, sw.tol)


def _tuple_z_cases(sw: Sweep) -> Iterator[Dict[str, Any]]:
    """(x_1..x_n, z) cases; z runs over the grid of the frozen argument."""
    explicit = sw.explicit_cases()
    if explicit is not None:
        for case in explicit:
            yield {**case, "points": sw.as_x(case["points"])}
        return
    xs = sw.fx.domain.points
    zs = sw.fx.second_domain.points
    for n in sw.arities():
        if n > len(xs):
            break
        for combo, (zi,) in sw.keys([Factor(len(xs), n, combination=True), Factor(len(zs))]):
            yield {"points": xs[list(combo)], "z": zs[zi]}


def _fits_below(sw: Sweep, x_i, z_i, hard: Optional[PointCloud], strict: Optional[PointCloud]) -> bool:
    target = sw.fx.value_extremal(x_i, z_i, sw.cone, ExtremalMode.MAX)
    if hard is not None and inclusion_violation(hard, target, sw.cone, "minus",
                                                reduce_lhs=False, reduce_rhs=False) is not None:
        return False
    if strict is not None and inclusion_violation(strict, target, sw.cone, "minus", interior=True,
                                                  reduce_lhs=False, reduce_rhs=False) is not None:
        return False
    return True


def _reduced_max(sw: Sweep, parts: List[np.ndarray]) -> Optional[PointCloud]:
    parts = [p for p in parts if len(p)]
    if not parts:
        return None
    return extremal_points(PointCloud(np.vstack(parts), eps=sw.tol), sw.cone, ExtremalMode.MAX)


def _transfer_v_targets(sw: Sweep, case: Dict[str, Any]) -> List[Optional[np.ndarray]]:
    """
    For each anchor x_i, the first grid z_i taking every F(x_lambda, z) n F(x_i, X)
    below F(x_i, z_i) (-S where F(x_lambda, z) meets Max_w F(x_lambda, X),
    -int S elsewhere), or None when no z_i works.
    """
    fx, pts, z = sw.fx, case["points"], case["z"]
    n = len(pts)
    hard = [[] for _ in range(n)]
    strict = [[] for _ in range(n)]
    lambdas = sw.case_lambdas(case, n)
    for lam in lambdas:
        sw.coverage["lambdas"] += 1
        x_lam = lam @ pts
        values = fx.evaluate(x_lam, z).points
        bucket = hard if _meets_row_weak_max(sw, x_lam, z) else strict
        for i, p in enumerate(pts):
            bucket[i].append(values[fx.row_oracle(p).contains_many(values, sw.tol)])
    zs = fx.second_domain.points
    targets = []
    for i, p in enumerate(pts):
        h, s = _reduced_max(sw, hard[i]), _reduced_max(sw, strict[i])
        if h is None and s is None:
            targets.append(zs[0])
            continue
        found = None
        for zi in zs:
            sw.coverage["z_candidates"] += 1
            if _fits_below(sw, p, zi, h, s):
                found = zi
                break
        targets.append(found)
    return targets


def _transfer_iii_targets(sw: Sweep, case: Dict[str, Any]) -> List[Optional[np.ndarray]]:
    """
    For each anchor x_i, the first grid z_i with F(x_i, z_i) n F(x_lambda, X)
    above F(x_lambda, z) (+S where F(x_lambda, z) meets Max_w F(x_lambda, X),
    +int S elsewhere) for every lambda.
    """
    fx, pts, z = sw.fx, case["points"], case["z"]
    n = len(pts)
    views = []
    for lam in sw.case_lambdas(case, n):
        sw.coverage["lambdas"] += 1
        x_lam = lam @ pts
        views.append((
            fx.value_extremal(x_lam, z, sw.cone, ExtremalMode.MIN),
            not _meets_row_weak_max(sw, x_lam, z),
            fx.row_oracle(x_lam),
        ))
    targets = []
    for p in pts:
        found = None
        for zi in fx.second_domain.points:
            sw.coverage["z_candidates"] += 1
            values = fx.evaluate(p, zi).points
            ok = True
            for target, strict, oracle in views:
                inside = values[oracle.contains_many(values, sw.tol)]
                if len(inside) and inclusion_violation(inside, target, sw.cone, "plus", interior=strict,
                                                       reduce_rhs=False) is not None:
                    ok = False
                    break
            if ok:
                found = zi
                break
        targets.append(found)
    return targets


def check_transfer_mu(sw: Sweep) -> Verdict:
    kind = sw.kind
    if kind not in TRANSFER_MU_KINDS:
        raise CheckError(f"{kind.value} is not a transfer mu kind")
    if kind is PropertyKind.TRANSFER_MU_SCALAR and not sw.fx.single_valued:
        raise CheckError(f"transfer_mu_scalar needs a single-valued fixture, {sw.fx.name} is set-valued")
    weak = kind in (PropertyKind.TRANSFER_WEAK_MU_V, PropertyKind.TRANSFER_WEAK_MU_III)
    upper = kind in (PropertyKind.TRANSFER_MU_III, PropertyKind.TRANSFER_WEAK_MU_III)
    search = _transfer_iii_targets if upper else _transfer_v_targets
    for case in _tuple_z_cases(sw):
        n = len(case["points"])
        sw.coverage[f"tuples_n{n}"] += 1
        targets = search(sw, case)
        missing = [i for i, t in enumerate(targets) if t is None]
        if "index" in case:
            missing = [i for i in missing if i == case["index"]]
        failed = len(missing) == n if weak else bool(missing)
        if failed:
            witness_case = {"points": case["points"], "z": case["z"]}
            if not weak:
                witness_case["index"] = missing[0]
            witness = {"case": witness_case, "anchors_without_target": missing}
            return sw.finish(Status.REFUTED, witness)
    return sw.finish(Status.NOT_REFUTED)


def _pair_cases(sw: Sweep) -> Iterator[Dict[str, Any]]:
    explicit = sw.explicit_cases()
    dx = sw.fx.domain.dim
    if explicit is None and sw.explicit_tuples() is not None:
        explicit = [
            {"points": t.reshape(2, -1)[:, :dx], "seconds": t.reshape(2, -1)[:, dx:]}
            for t in sw.explicit_tuples()
        ]
    if explicit is not None:
        for case in explicit:
            yield {**case, "points": sw.as_x(case["points"]),
                   "seconds": np.asarray(case["seconds"], dtype=float).reshape(2, -1)}
        return
    xs = sw.fx.domain.points
    ys = sw.fx.second_domain.points
    factors = [Factor(len(xs)), Factor(len(ys)), Factor(len(xs)), Factor(len(ys))]
    for (a,), (b,), (c,), (d,) in sw.keys(factors):
        yield {"points": xs[[a, c]], "seconds": ys[[b, d]]}


def _pair_side(sw: Sweep, kind: PropertyKind, x_i, y_i, x_lam) -> Optional[np.ndarray]:
    fx, cone = sw.fx, sw.cone
    if kind is PropertyKind.PAIR_PROPERLY_III:
        return inclusion_violation(fx.value_extremal(x_i, y_i, cone, ExtremalMode.MIN),
                                   fx.value_extremal(x_lam, y_i, cone, ExtremalMode.MIN),
                                   cone, "plus", reduce_lhs=False, reduce_rhs=False)
    if kind is PropertyKind.PAIR_PROPERLY_V:
        return inclusion_violation(fx.value_extremal(x_lam, y_i, cone, ExtremalMode.MAX),
                                   fx.value_extremal(x_i, y_i, cone, ExtremalMode.MAX),
                                   cone, "minus", reduce_lhs=False, reduce_rhs=False)
    values = fx.evaluate(x_i, y_i).points
    if kind is PropertyKind.PAIR_PROPERLY_PLAIN:
        inside = fx.value_set(x_lam, y_i).contains_many(values, sw.tol)
        return None if inside.all() else values[np.argmin(inside)]
    # single-valued: f(x_i, y_i) in f(x_lambda, y_i) + S
    target = fx.evaluate(x_lam, y_i).points
    return None if cone.contains(values[0] - target[0]) else values[0]


def check_pair_properly(sw: Sweep) -> Verdict:
    kind = sw.kind
    if kind not in PAIR_KINDS:
        raise CheckError(f"{kind.value} is not a pair properly kind")
    if kind is PropertyKind.PAIR_PROPERLY_SCALAR and not sw.fx.single_valued:
        raise CheckError(f"pair_properly_scalar needs a single-valued fixture, {sw.fx.name} is set-valued")
    for case in _pair_cases(sw):
        pts, seconds = case["points"], case["seconds"]
        sw.coverage["pairs"] += 1
        for lam in sw.case_lambdas(case, 2, open_interior=True):
            sw.coverage["lambdas"] += 1
            x_lam = lam @ pts
            found = []
            for p, y in zip(pts, seconds):
                v = _pair_side(sw, kind, p, y, x_lam)
                if v is None:
                    break
                found.append(v)
            else:
                witness = {"case": {"points": pts, "seconds": seconds, "lambda": lam}, "combined": x_lam,
                           "violations": [sw.value_out(v) for v in found]}
                return sw.finish(Status.REFUTED, witness)
    return sw.finish(Status.NOT_REFUTED)


def _pair_z_cases(sw: Sweep) -> Iterator[Dict[str, Any]]:
    explicit = sw.explicit_cases()
    if explicit is not None:
        for case in explicit:
            yield {**case, "points": sw.as_x(case["points"])}
        return
    xs = sw.fx.domain.points
    zs = sw.fx.second_domain.points
    for combo, (zi,) in sw.keys([Factor(len(xs), 2, combination=True), Factor(len(zs))]):
        yield {"points": xs[list(combo)], "z": zs[zi]}


def check_transfer_properly(sw: Sweep) -> Verdict:
    """Where F(x_lambda, z) misses Min_w F(x_i, X), F(x_i, z) and F(x_lambda, z) must compare."""
    kind = sw.kind
    if kind not in TRANSFER_PROPERLY_KINDS:
        raise CheckError(f"{kind.value} is not a transfer properly kind")
    fx, cone = sw.fx, sw.cone
    for case in _pair_z_cases(sw):
        pts, z = case["points"], case["z"]
        sw.coverage["tuples_n2"] += 1
        indices = [case["index"]] if "index" in case else range(2)
        for lam in sw.case_lambdas(case, 2, open_interior=True):
            sw.coverage["lambdas"] += 1
            x_lam = lam @ pts
            for i in indices:
                weak_min = fx.row_extremal(pts[i], cone, ExtremalMode.MIN_W).points
                if _meets(fx, x_lam, z, weak_min, sw.tol):
                    continue
                sw.coverage["premises_met"] += 1
                if kind is PropertyKind.TRANSFER_PROPERLY_III:
                    v = inclusion_violation(fx.value_extremal(pts[i], z, cone, ExtremalMode.MIN),
                                            fx.value_extremal(x_lam, z, cone, ExtremalMode.MIN),
                                            cone, "plus", reduce_lhs=False, reduce_rhs=False)
                else:
                    v = inclusion_violation(fx.value_extremal(x_lam, z, cone, ExtremalMode.MAX),
                                            fx.value_extremal(pts[i], z, cone, ExtremalMode.MAX),
                                            cone, "minus", reduce_lhs=False, reduce_rhs=False)
                if v is not None:
                    witness = {"case": {"points": pts, "z": z, "lambda": lam, "index": i},
                               "combined": x_lam, "violations": [sw.value_out(v)]}
                    return sw.finish(Status.REFUTED, witness)
    return sw.finish(Status.NOT_REFUTED)


def _primed_view(sw: Sweep, primed: bool) -> Tuple[SetValuedFixture, Cone]:
    """The primed conditions are the plain ones on (x, y) -> F(y, x) under -S."""
    if primed:
        return sw.fx.transposed(), sw.cone.negated()
    return sw.fx, sw.cone


def check_alpha(sw: Sweep) -> Verdict:
    """Every row union F(x, X) has a maximal point dominating the whole union."""
    if sw.kind not in (PropertyKind.ALPHA, PropertyKind.ALPHA_PRIME):
        raise CheckError(f"{sw.kind.value} is not alpha or alpha_prime")
    fx, cone = _primed_view(sw, sw.kind is PropertyKind.ALPHA_PRIME)
    explicit = sw.explicit_cases()
    cases = explicit if explicit is not None else [{"point": x} for x in fx.domain.points]
    found = []
    for case in cases:
        x = np.atleast_1d(case["point"])
        sw.coverage["points"] += 1
        maximal = fx.row_extremal(x, cone, ExtremalMode.MAX).points
        candidates = maximal
        if "z" in case:
            stored = np.atleast_2d(case["z"])
            # a stored choice must still be one of the maximal points
            near = np.linalg.norm(maximal - stored, axis=1) <= max(sw.tol, 1e-12)
            candidates = stored if near.any() else stored[:0]
        choice = None
        for z in candidates:
            sw.coverage["z_candidates"] += 1
            if translate_violations(maximal, z.reshape(1, -1), cone, "minus").size == 0:
                choice = z
                break
        if choice is None:
            witness = {"case": {"point": x}, "maximal": sw.value_out(maximal)}
            return sw.finish(Status.NOT_CONFIRMED, witness, notes=["no maximal point dominates the row union"])
        found.append({"point": x, "z": choice})
    return sw.finish(Status.CONFIRMED, {"cases": found})


class _RowMeetsCache:
    """Grid values y with F(x, y) meeting Max_w F(x, X), per anchor x."""

    def __init__(self, fx: SetValuedFixture, cone: Cone, tol: float):
        self.fx = fx
        self.cone = cone
        self.tol = tol
        self._rows: Dict[tuple, np.ndarray] = {}

    def __call__(self, x) -> np.ndarray:
        key = tuple(np.round(np.atleast_1d(x), 12))
        if key not in self._rows:
            weak_max = self.fx.row_extremal(x, self.cone, ExtremalMode.MAX_W).points
            ys = self.fx.second_domain.points
            keep = [self.fx.value_set(x, y).contains_many(weak_max, self.tol).any() for y in ys]
            self._rows[key] = ys[np.asarray(keep, dtype=bool)]
        return self._rows[key]


def _gamma_cases(sw: Sweep, fx: SetValuedFixture) -> Iterator[Dict[str, Any]]:
    explicit = sw.explicit_cases()
    if explicit is not None:
        for case in explicit:
            yield {**case, "points": np.asarray(case["points"], dtype=float).reshape(-1, fx.domain.dim)}
        return
    xs = fx.domain.points
    for n in sw.arities():
        if n > len(xs):
            break
        for (combo,) in sw.keys([Factor(len(xs), n, combination=True)]):
            yield {"points": xs[list(combo)]}


def check_gamma(sw: Sweep) -> Verdict:
    """
    Search for anchors x_i, partners y_i and y* in co{x_i} with F(x_i, y_i)
    meeting Max_w F(x_i, X) and F(x_i, y_i) inside F(x_i, y*) - S.
    """
    if sw.kind not in (PropertyKind.GAMMA, PropertyKind.GAMMA_PRIME):
        raise CheckError(f"{sw.kind.value} is not gamma or gamma_prime")
    fx, cone = _primed_view(sw, sw.kind is PropertyKind.GAMMA_PRIME)
    partners = _RowMeetsCache(fx, cone, sw.tol)
    for case in _gamma_cases(sw, fx):
        pts = case["points"]
        n = len(pts)
        sw.coverage[f"tuples_n{n}"] += 1
        stored = case.get("selection")
        for lam in sw.case_lambdas(case, n):
            sw.coverage["lambdas"] += 1
            y_star = lam @ pts
            if not fx.second_domain.contains(y_star):
                continue
            chosen = []
            for i, p in enumerate(pts):
                options = partners(p)
                if stored is not None:
                    keep = np.linalg.norm(options - stored[i], axis=1) <= 1e-12
                    options = options[keep]
                try:
                    ceiling = fx.value_extremal(p, y_star, cone, ExtremalMode.MAX)
                except FixtureError:
                    break
                pick = None
                for y in options:
                    sw.coverage["partners"] += 1
                    if inclusion_violation(fx.value_extremal(p, y, cone, ExtremalMode.MAX), ceiling, cone,
                                           "minus", reduce_lhs=False, reduce_rhs=False) is None:
                        pick = y
                        break
                if pick is None:
                    break
                chosen.append(pick)
            if len(chosen) == n:
                witness = {"case": {"points": pts, "lambda": lam, "selection": np.vstack(chosen)},
                           "y_star": y_star}
                return sw.finish(Status.CONFIRMED, witness)
    return sw.finish(Status.NOT_CONFIRMED)
