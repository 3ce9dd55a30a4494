"""
Weakly z-convexity and the row-domination hypothesis that accompanies it.

For a target z the search looks, per tuple x_1..x_n, for partners y_i and a
reweighting curve g such that, when every F(x_i, y_i) meets z + S, so does
F(sum lambda_i x_i, sum g_i(lambda) y_i) for every lambda on the grid. A
single-valued map is handled by the same test (meeting z + S is membership).
"""
import logging
from typing import Any, Dict, Iterator, List, Optional

import numpy as np

from cones import Cone
from convexity_checks import curves_for
from extremal import ExtremalMode, extremal_of_union
from fixtures import SetValuedFixture
from g_curves import GCurve
from point_cloud import PointCloud
from sweeps import Factor, Sweep, inclusion_violation, selection_product, spread_indices
from verdicts import CheckError, PropertyKind, Status, Verdict

logger = logging.getLogger(__name__)


def weak_max_floor(fx: SetValuedFixture, cone: Cone) -> PointCloud:
    """Min of the union over x of Max_w F(x, X)."""
    rows = [fx.row_extremal(x, cone, ExtremalMode.MAX_W) for x in fx.domain.points]
    return extremal_of_union(rows, cone, ExtremalMode.MIN)


def _value_box(fx: SetValuedFixture):
    pts = np.vstack([fx.row_union(x).points for x in fx.domain.points])
    return pts.min(axis=0), pts.max(axis=0)


def target_points(sw: Sweep) -> np.ndarray:
    """
    Targets z in the oriented view: explicit points, a regular grid over the
    bounding box of all sampled values, or the floor of the weak-max rows.
    """
    d = sw.fx.codomain_dim
    if "z" in sw.options:
        zs = sw.value_out(np.asarray(sw.options["z"], dtype=float).reshape(-1, d))
    elif "z_grid" in sw.options:
        k = int(sw.options["z_grid"])
        if k < 1:
            raise CheckError(f"z_grid needs at least one point per axis, got {k}")
        lo, hi = _value_box(sw.fx)
        axes = [np.linspace(lo[i], hi[i], k) if k > 1 else np.array([lo[i]]) for i in range(d)]
        zs = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    else:
        zs = weak_max_floor(sw.fx, sw.cone).points
    if len(zs) == 0:
        raise CheckError("the set of targets z is empty")
    return zs


def _meets_above(sw: Sweep, x, y, z: np.ndarray) -> bool:
    top = sw.fx.value_extremal(x, y, sw.cone, ExtremalMode.MAX).points
    return bool(sw.cone.contains_many(top - z).any())


def _partners(sw: Sweep) -> np.ndarray:
    ys = sw.fx.second_domain.points
    return ys[spread_indices(len(ys), sw.cfg.selection_cap)]


def _weakly_z_cases(sw: Sweep, zs: np.ndarray) -> Iterator[Dict[str, Any]]:
    explicit = sw.explicit_cases()
    if explicit is not None:
        for case in explicit:
            yield {**case, "points": sw.as_x(case["points"]), "z": sw.value_out(np.atleast_1d(case["z"]))}
        return
    tuples = sw.explicit_tuples()
    if tuples is not None:
        for z in zs:
            for t in tuples:
                yield {"z": z, "points": sw.as_x(t)}
        return
    xs = sw.fx.domain.points
    for n in sw.arities(2):
        if n > len(xs):
            break
        for (zi,), combo in sw.keys([Factor(len(zs)), Factor(len(xs), n, combination=True)]):
            yield {"z": zs[zi], "points": xs[list(combo)]}


def _first_miss(sw: Sweep, z, pts, selection, curve: GCurve, lam: np.ndarray) -> int:
    x_lam = lam @ pts
    y_comb = curve(lam, pts) @ selection
    for j in range(len(lam)):
        if not _meets_above(sw, x_lam[j], y_comb[j], z):
            return j
    return -1


def _premise(sw: Sweep, z, pts, selection) -> bool:
    return all(_meets_above(sw, p, y, z) for p, y in zip(pts, selection))


def _replay_case(sw: Sweep, case: Dict[str, Any]) -> Optional[Dict[str, Any]]:
    pts, z = case["points"], case["z"]
    n = len(pts)
    selection = np.asarray(case["selection"], dtype=float).reshape(n, -1)
    if not _premise(sw, z, pts, selection):
        sw.coverage["vacuous"] += 1
        return {**case, "vacuous": True}
    lam = sw.case_lambdas(case, n)
    for curve in curves_for(sw, case, n):
        sw.coverage["curves"] += 1
        if _first_miss(sw, z, pts, selection, curve, lam) < 0:
            sw.coverage["premise_held"] += 1
            return {**case, "curve": curve.describe(), "vacuous": False}
    return None


def _search_case(sw: Sweep, case: Dict[str, Any], partners: np.ndarray) -> Optional[Dict[str, Any]]:
    pts, z = case["points"], case["z"]
    n = len(pts)
    ok = [np.array([_meets_above(sw, p, y, z) for y in partners]) for p in pts]
    lam = sw.case_lambdas(case, n)
    if all(o.any() for o in ok):
        Y = selection_product([partners[o] for o in ok])
        Y = Y[spread_indices(len(Y), sw.cfg.selection_cap * n)]
        sw.coverage["selections"] += len(Y)
        for curve in curves_for(sw, case, n):
            sw.coverage["curves"] += 1
            for selection in Y:
                if _first_miss(sw, z, pts, selection, curve, lam) < 0:
                    sw.coverage["premise_held"] += 1
                    return {"z": z, "points": pts, "selection": selection, "curve": curve.describe(),
                            "vacuous": False}
    for i, o in enumerate(ok):
        if not o.all():
            # a partner outside the premise satisfies the implication
            selection = np.repeat(partners[:1], n, axis=0)
            selection[i] = partners[int(np.argmin(o))]
            sw.coverage["vacuous"] += 1
            return {"z": z, "points": pts, "selection": selection, "vacuous": True}
    return None


def check_weakly_z(sw: Sweep) -> Verdict:
    """Confirmed when every (z, tuple) pair has partners and a curve, vacuously or not."""
    if sw.kind is not PropertyKind.WEAKLY_Z:
        raise CheckError(f"{sw.kind.value} is not weakly_z")
    if sw.fx.unary:
        raise CheckError(f"weakly_z needs a map of two arguments, {sw.fx.name} has one")
    zs = target_points(sw) if sw.options.get("cases") is None else np.empty((0, sw.fx.codomain_dim))
    partners = _partners(sw)
    replay = sw.options.get("cases") is not None
    found: List[Dict[str, Any]] = []
    for case in _weakly_z_cases(sw, zs):
        sw.coverage[f"tuples_n{len(case['points'])}"] += 1
        if replay and "selection" in case:
            hit = _replay_case(sw, case)
        else:
            hit = _search_case(sw, case, partners)
        if hit is None:
            witness = {"case": {"z": sw.value_out(case["z"]), "points": case["points"]}}
            return sw.finish(Status.NOT_CONFIRMED, witness,
                             notes=["no partners and curve in the family keep z + S reachable"])
        found.append({**hit, "z": sw.value_out(hit["z"])})
    if not found:
        raise CheckError("no tuple was searched")
    notes = []
    vacuous = sum(1 for f in found if f["vacuous"])
    if vacuous:
        notes.append(f"{vacuous} of {len(found)} cases hold only because the premise fails")
    return sw.finish(Status.CONFIRMED, {"cases": found}, notes=notes)


def check_row_domination(sw: Sweep) -> Verdict:
    """Every row union F(x, X) reaches the targets: Z inside F(x, X) - S at each grid x."""
    if sw.kind is not PropertyKind.ROW_DOMINATION:
        raise CheckError(f"{sw.kind.value} is not row_domination")
    zs = target_points(sw)
    sw.coverage["z_points"] = len(zs)
    explicit = sw.explicit_cases()
    points = [np.atleast_1d(c["point"]) for c in explicit] if explicit is not None else list(sw.fx.domain.points)
    for x in points:
        sw.coverage["points"] += 1
        miss = inclusion_violation(zs, sw.fx.row_union(x), sw.cone, "minus", reduce_lhs=False)
        if miss is not None:
            witness = {"case": {"point": x}, "z": sw.value_out(miss)}
            return sw.finish(Status.NOT_CONFIRMED, witness, notes=["a target is not below the row union"])
    return sw.finish(Status.CONFIRMED, {"cases": [{"point": x} for x in points]})
