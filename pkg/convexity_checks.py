"""
Convexity kinds of a map of one argument: the slices F(., y) of a fixture.

Each check walks pairs (or n-tuples) of grid points per slice together with
weights on the lambda grid and stops at the first combination that breaks the
defining inclusion. wcg and wnq search selections y_i in the sampled values
F(x_i) instead of testing whole sets.
"""
import logging
from typing import Any, Dict, Iterator, List, Optional, Sequence

import numpy as np

from cones import translate_violations
from extremal import ExtremalMode, convex_combination_samples, extremal_points, hull_samples
from g_curves import GCurve, GCurveFamily, check_curve, curve_from_dict
from point_cloud import PointCloud
from sweeps import Factor, Sweep, hull_translate_contains, inclusion_violation, selection_product
from verdicts import CheckError, PropertyKind, Status, Verdict

logger = logging.getLogger(__name__)

SINGLE_MAP_KINDS = frozenset({
    PropertyKind.PROPERLY_QC_III,
    PropertyKind.PROPERLY_QC_V,
    PropertyKind.NATURALLY_QC_III,
    PropertyKind.NATURALLY_QC_V,
    PropertyKind.S_QC,
    PropertyKind.QC,
    PropertyKind.NATURAL_QC_SCALAR,
})


def slice_cases(sw: Sweep, arities: Sequence[int]) -> Iterator[Dict[str, Any]]:
    """(slice y, anchor points) cases: explicit ones, given tuples on every slice, or the capped grid sweep."""
    explicit = sw.explicit_cases()
    if explicit is not None:
        for case in explicit:
            yield {**case, "points": sw.as_x(case["points"])}
        return
    ys = sw.slices()
    tuples = sw.explicit_tuples()
    if tuples is not None:
        for y in ys:
            for t in tuples:
                yield {"slice": y, "points": sw.as_x(t)}
        return
    xs = sw.fx.domain.points
    for n in arities:
        if n > len(xs):
            break
        for (yi,), combo in sw.keys([Factor(len(ys)), Factor(len(xs), n, combination=True)]):
            yield {"slice": ys[yi], "points": xs[list(combo)]}


def _min(sw: Sweep, x, y) -> PointCloud:
    return sw.fx.value_extremal(x, y, sw.cone, ExtremalMode.MIN)


def _max(sw: Sweep, x, y) -> PointCloud:
    return sw.fx.value_extremal(x, y, sw.cone, ExtremalMode.MAX)


def _properly_iii(sw, pts, y, x_lam, prepared):
    target = _min(sw, x_lam, y)
    found = [inclusion_violation(_min(sw, p, y), target, sw.cone, "plus", reduce_lhs=False, reduce_rhs=False)
             for p in pts]
    if all(v is not None for v in found):
        return {"violations": [sw.value_out(v) for v in found]}
    return None


def _properly_v(sw, pts, y, x_lam, prepared):
    value = _max(sw, x_lam, y)
    found = [inclusion_violation(value, _max(sw, p, y), sw.cone, "minus", reduce_lhs=False, reduce_rhs=False)
             for p in pts]
    if all(v is not None for v in found):
        return {"violations": [sw.value_out(v) for v in found]}
    return None


def _union_extremal(sw, pts, y, mode) -> PointCloud:
    return extremal_points(PointCloud.concat([sw.fx.evaluate(p, y) for p in pts], eps=sw.tol), sw.cone, mode)


def _prepare_naturally_iii(sw, pts, y):
    return hull_samples(_union_extremal(sw, pts, y, ExtremalMode.MIN), sw.cone, sw.cfg.coeff_steps, "plus")


def _naturally_iii(sw, pts, y, x_lam, hull):
    v = inclusion_violation(hull, _min(sw, x_lam, y), sw.cone, "plus", reduce_lhs=False, reduce_rhs=False)
    return None if v is None else {"violations": [sw.value_out(v)]}


def _prepare_naturally_v(sw, pts, y):
    base = _union_extremal(sw, pts, y, ExtremalMode.MAX)
    if base.dim == 1:
        vals = base.points[:, 0]
        base = PointCloud(np.array([[vals.min()], [vals.max()]]), eps=sw.tol)
    return base, convex_combination_samples(base, sw.cfg.coeff_steps)


def _naturally_v(sw, pts, y, x_lam, prepared):
    base, hull = prepared
    value = _max(sw, x_lam, y).points
    suspects = value[np.flatnonzero(~_covered(sw, value, hull.points, "minus"))]
    # the sampled hull is smaller than the hull; suspects are settled exactly
    for a in suspects:
        if not hull_translate_contains(a, base, sw.cone, "minus"):
            return {"violations": [sw.value_out(a)]}
    return None


def _covered(sw, A: np.ndarray, B: np.ndarray, sign: str) -> np.ndarray:
    mask = np.ones(len(A), dtype=bool)
    mask[translate_violations(A, B, sw.cone, sign)] = False
    return mask


def _joins(sw, pts, y) -> np.ndarray:
    """N^-1 max(Na, Nb) over minimal points a, b: the corners of (a + S) n (b + S)."""
    normals = sw.cone.normals
    proj = [(_min(sw, p, y).points @ normals.T) for p in pts]
    corners = np.maximum(proj[0][:, None, :], proj[1][None, :, :]).reshape(-1, normals.shape[0])
    return corners @ np.linalg.inv(normals).T


def _s_qc(sw, pts, y, x_lam, joins):
    v = inclusion_violation(joins, _min(sw, x_lam, y), sw.cone, "plus", reduce_rhs=False)
    return None if v is None else {"violations": [sw.value_out(v)]}


def _prepare_qc(sw, pts, y):
    """Samples of F(x_1, y) lying in every F(x_i, y)."""
    common = sw.fx.evaluate(pts[0], y).points
    for p in pts[1:]:
        common = common[sw.fx.value_set(p, y).contains_many(common, sw.tol)]
    return common


def _qc(sw, pts, y, x_lam, common):
    if len(common) == 0:
        return None
    inside = sw.fx.value_set(x_lam, y).contains_many(common, sw.tol)
    if inside.all():
        return None
    return {"violations": [sw.value_out(common[np.argmin(inside)])]}


def _natural_scalar(sw, pts, y, x_lam, prepared):
    f1, f2 = (sw.fx.evaluate(p, y).points[0] for p in pts)
    f_lam = sw.fx.evaluate(x_lam, y).points[0]
    mu = np.linspace(0.0, 1.0, sw.cfg.coeff_steps + 1)
    combos = mu[:, None] * f1 + (1.0 - mu)[:, None] * f2
    if sw.cone.contains_many(combos - f_lam).any():
        return None
    if hull_translate_contains(f_lam, np.vstack([f1, f2]), sw.cone, "minus"):
        return None
    return {"violations": [sw.value_out(f_lam)], "values": [sw.value_out(f1), sw.value_out(f2)]}


_TESTS = {
    PropertyKind.PROPERLY_QC_III: (None, _properly_iii),
    PropertyKind.PROPERLY_QC_V: (None, _properly_v),
    PropertyKind.NATURALLY_QC_III: (_prepare_naturally_iii, _naturally_iii),
    PropertyKind.NATURALLY_QC_V: (_prepare_naturally_v, _naturally_v),
    PropertyKind.S_QC: (_joins, _s_qc),
    PropertyKind.QC: (_prepare_qc, _qc),
    PropertyKind.NATURAL_QC_SCALAR: (None, _natural_scalar),
}

_CLOSED_RANGE = frozenset({PropertyKind.QC, PropertyKind.NATURALLY_QC_III})


def check_single_map_convexity(sw: Sweep) -> Verdict:
    kind = sw.kind
    if kind not in SINGLE_MAP_KINDS:
        raise CheckError(f"{kind.value} is not a single-map convexity kind")
    if kind is PropertyKind.S_QC and not sw.cone.is_simplicial:
        raise CheckError("s_qc needs a simplicial cone (as many normals as dimensions)")
    if kind is PropertyKind.NATURAL_QC_SCALAR and not sw.fx.single_valued:
        raise CheckError(f"natural_qc_scalar needs a single-valued fixture, {sw.fx.name} is set-valued")
    prepare, test = _TESTS[kind]
    arities = sw.arities(2) if kind is PropertyKind.QC else [2]
    for case in slice_cases(sw, arities):
        pts, y = case["points"], case["slice"]
        n = len(pts)
        if n != 2 and kind is not PropertyKind.QC:
            raise CheckError(f"{kind.value} compares pairs of points, got {n}")
        sw.coverage[f"tuples_n{n}"] += 1
        prepared = prepare(sw, pts, y) if prepare else None
        if kind is PropertyKind.QC and len(prepared) == 0:
            sw.coverage["empty_intersections"] += 1
        # closed lambda range for qc and naturally_qc_iii; the other kinds hold trivially at the endpoints
        for lam in sw.case_lambdas(case, n, open_interior=kind not in _CLOSED_RANGE):
            sw.coverage["lambdas"] += 1
            x_lam = lam @ pts
            failure = test(sw, pts, y, x_lam, prepared)
            if failure is not None:
                witness = {"case": {"slice": y, "points": pts, "lambda": lam}, "combined": x_lam, **failure}
                return sw.finish(Status.REFUTED, witness)
    return sw.finish(Status.NOT_REFUTED)


def _surviving(sw: Sweep, y, weights: np.ndarray, x_lam: np.ndarray, Y: np.ndarray):
    """
    Selections whose reweighted combination stays in F(x_lambda, y) for every
    lambda, and for each dropped selection the index of the first failure.
    """
    alive = np.ones(len(Y), dtype=bool)
    first_fail = np.full(len(Y), -1)
    for j in range(len(weights)):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        values = np.einsum("n,snd->sd", weights[j], Y[idx])
        hit = sw.fx.value_set(x_lam[j], y).contains_many(values, sw.tol)
        first_fail[idx[~hit]] = j
        alive[idx[~hit]] = False
    return alive, first_fail


def _selections(sw: Sweep, case: Dict[str, Any]) -> np.ndarray:
    stored = case.get("selection")
    pts, y = case["points"], case["slice"]
    if stored is not None:
        return np.asarray(stored, dtype=float).reshape(1, len(pts), sw.fx.codomain_dim)
    return selection_product([sw.candidates(p, y) for p in pts])


def check_wcg(sw: Sweep) -> Verdict:
    """Refuted when some tuple admits no sampled selection whose combinations stay in the graph."""
    for case in slice_cases(sw, sw.arities(2)):
        pts, y = case["points"], case["slice"]
        n = len(pts)
        sw.coverage[f"tuples_n{n}"] += 1
        Y = _selections(sw, case)
        sw.coverage["selections"] += len(Y)
        lam = sw.case_lambdas(case, n)
        alive, first_fail = _surviving(sw, y, lam, lam @ pts, Y)
        if not alive.any():
            failures = [{"selection": Y[s], "lambda": lam[first_fail[s]]} for s in range(len(Y))]
            witness = {"case": {"slice": y, "points": pts}, "failures": failures}
            return sw.finish(Status.REFUTED, witness)
    return sw.finish(Status.NOT_REFUTED)


def curve_family(sw: Sweep) -> Optional[List[GCurve]]:
    """Explicit curves from the options, or None for the default family."""
    curves = sw.options.get("curves")
    if curves is None:
        return None
    if not curves:
        raise CheckError("the g-family is empty")
    try:
        return [curve_from_dict(c) for c in curves]
    except (ValueError, TypeError) as exc:
        raise CheckError(f"invalid curve: {exc}") from exc


def default_family(sw: Sweep) -> GCurveFamily:
    return GCurveFamily(extra=list(sw.source.witness_curves))


def curves_for(sw: Sweep, case: Dict[str, Any], n: int) -> List[GCurve]:
    if "curve" in case:
        return [curve_from_dict(case["curve"])]
    explicit = curve_family(sw)
    if explicit is None:
        return list(default_family(sw).curves(n))
    for curve in explicit:
        try:
            problems = check_curve(curve, n, sw.cfg.lambda_steps, case["points"])
        except ValueError as exc:
            raise CheckError(f"curve {curve.name} does not apply to {n} points: {exc}") from exc
        if problems:
            raise CheckError(f"curve {curve.describe()} is not a reweighting: {', '.join(problems)}")
    return explicit


def check_wnq(sw: Sweep) -> Verdict:
    """Confirmed when every tuple has a selection and a curve keeping all reweighted combinations in the graph."""
    found = []
    for case in slice_cases(sw, sw.arities(2)):
        pts, y = case["points"], case["slice"]
        n = len(pts)
        sw.coverage[f"tuples_n{n}"] += 1
        Y = _selections(sw, case)
        lam = sw.case_lambdas(case, n)
        x_lam = lam @ pts
        for curve in curves_for(sw, case, n):
            sw.coverage["curves"] += 1
            alive, _ = _surviving(sw, y, curve(lam, pts), x_lam, Y)
            if alive.any():
                s = int(np.argmax(alive))
                found.append({"slice": y, "points": pts, "selection": Y[s], "curve": curve.describe()})
                break
        else:
            witness = {"case": {"slice": y, "points": pts}}
            return sw.finish(Status.NOT_CONFIRMED, witness,
                             notes=["no selection and curve in the family works for this tuple"])
    if not found:
        raise CheckError("no tuple was searched")
    return sw.finish(Status.CONFIRMED, {"cases": found})
