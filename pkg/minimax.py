"""
Minimax conclusions on fixtures: diagonal witnesses, the z1/z2 certificates and
the inclusion forms, plus the hypothesis bundles each theorem is checked with.

The mirrored statements (ii parts, the Min/Max inclusion) are evaluated on
the transposed map under -S; values are unchanged by that, so certificates
come out in the coordinates of F.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from checkers import run_check
from cones import Cone, ConeRelation, translate_violations
from config import ToleranceConfig
from extremal import ExtremalMode, extremal_points
from fixtures import SetValuedFixture
from point_cloud import PointCloud
from verdicts import Argument, Polarity, PropertyKind, Verdict, to_jsonable
from weakly_z import weak_max_floor

logger = logging.getLogger(__name__)

CONSISTENT = "consistent-with-theorem"
HYPOTHESES_NOT_MET = "hypotheses-not-met"
NO_CERTIFICATE = "no-certificate"

CONCLUSIONS = ("thm41_i", "thm41_ii", "thm45", "thm46")
DIAGONAL_MODES = ("max_w_side", "min_w_side")


class TheoremError(ValueError):
    """Unknown theorem or conclusion id, or a fixture the statement does not apply to."""


def _mirror(fx: SetValuedFixture, cone: Cone, mirrored: bool) -> Tuple[SetValuedFixture, Cone]:
    return (fx.transposed(), cone.negated()) if mirrored else (fx, cone)


def _require_square(fx: SetValuedFixture) -> None:
    if not fx.is_square:
        raise TheoremError(f"{fx.name} has different grids for its two arguments")


def _tuned(cone: Cone, cfg: Optional[ToleranceConfig]) -> Tuple[Cone, ToleranceConfig]:
    cfg = cfg or ToleranceConfig()
    return cone.with_tolerances(cfg.eps_cone, cfg.eps_interior), cfg


def find_diagonal_witness(
    fx: SetValuedFixture, cone: Cone, mode: str = "max_w_side", cfg: Optional[ToleranceConfig] = None
) -> Optional[Dict[str, Any]]:
    """
    First grid point x* whose diagonal value F(x*, x*) meets Max_w F(x*, X)
    (max_w_side) or Min_w F(X, x*) (min_w_side); None when no point does.
    """
    if mode not in DIAGONAL_MODES:
        raise TheoremError(f"unknown diagonal mode '{mode}'; known: {', '.join(DIAGONAL_MODES)}")
    _require_square(fx)
    cone, cfg = _tuned(cone, cfg)
    view, order = _mirror(fx, cone, mode == "min_w_side")
    for x in view.domain.points:
        weak = view.row_extremal(x, order, ExtremalMode.MAX_W).points
        hit = view.value_set(x, x).contains_many(weak, cone.eps_cone)
        if hit.any():
            logger.info("diagonal witness for %s (%s) at %s", fx.name, mode, x.tolist())
            return {"mode": mode, "point": x, "meeting": weak[hit]}
    logger.info("no diagonal witness for %s (%s) on %d grid points", fx.name, mode, len(view.domain))
    return None


@dataclass
class MinimaxCertificate:
    """
    z1 and z2 with the relation between them. For the inclusion forms both are
    whole sets and the relation is a subset relation.
    """

    theorem: str
    z1: np.ndarray
    z2: np.ndarray
    relation: ConeRelation
    z1_home: str
    z2_home: str
    z1_set: PointCloud = field(repr=False)
    z2_set: PointCloud = field(repr=False)
    diag_witness: Optional[Dict[str, Any]] = None

    def problems(self) -> List[str]:
        """Re-checks of the certificate against its own data (empty when valid)."""
        out = []
        tol = max(self.relation.eps_cone, 1e-12)
        if not all(self.z1_set.contains_point(z, tol) for z in np.atleast_2d(self.z1)):
            out.append(f"z1 is not in {self.z1_home}")
        if not all(self.z2_set.contains_point(z, tol) for z in np.atleast_2d(self.z2)):
            out.append(f"z2 is not in {self.z2_home}")
        if not self.relation.holds():
            out.append(f"relation {self.relation.kind} does not hold")
        return out

    @property
    def valid(self) -> bool:
        return not self.problems()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": self.theorem,
            "z1": to_jsonable(self.z1),
            "z2": to_jsonable(self.z2),
            "relation": self.relation.to_dict(),
            "z1_home": self.z1_home,
            "z2_home": self.z2_home,
            "diag_witness": to_jsonable(self.diag_witness),
        }


@dataclass
class ConclusionResult:
    theorem: str
    fixture: str
    certificate: Optional[MinimaxCertificate]
    sets: Dict[str, np.ndarray] = field(default_factory=dict)
    failure: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.certificate is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": self.theorem,
            "fixture": self.fixture,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "sets": {k: to_jsonable(v) for k, v in self.sets.items()},
            "failure": self.failure,
            "notes": list(self.notes),
        }


_HOMES = {
    # (diagonal set, target set) for the plain and the mirrored reading
    False: ("Max of the diagonal union", "Min of the union of Max_w F(x, X)"),
    True: ("Min of the diagonal union", "Max of the union of Min_w F(X, y)"),
}


def _pair_conclusion(theorem: str, fx: SetValuedFixture, cone: Cone, mirrored: bool) -> ConclusionResult:
    view, order = _mirror(fx, cone, mirrored)
    top = extremal_points(view.diagonal(), order, ExtremalMode.MAX)
    floor = weak_max_floor(view, order)
    home1, home2 = _HOMES[mirrored]
    sets = {"z1_candidates": top.points, "z2_candidates": floor.points}
    gap = (top.points @ order.normals.T)[:, None, :] - (floor.points @ order.normals.T)[None, :, :]
    pairs = np.argwhere(np.all(gap >= -order.eps_cone, axis=-1))
    if pairs.size == 0:
        relation = "z1 in z2 - S" if mirrored else "z1 in z2 + S"
        return ConclusionResult(theorem, fx.name, None, sets,
                                failure=f"no pair of {home1} and {home2} with {relation}")
    i, j = pairs[0]
    kind = "in_minus" if mirrored else "in_plus"
    relation = ConeRelation(kind, top.points[i], floor.points[j], cone, eps_cone=cone.eps_cone)
    cert = MinimaxCertificate(theorem, top.points[i], floor.points[j], relation, home1, home2, top, floor)
    return ConclusionResult(theorem, fx.name, cert, sets)


def _inclusion_conclusion(theorem: str, fx: SetValuedFixture, cone: Cone, mirrored: bool) -> ConclusionResult:
    view, order = _mirror(fx, cone, mirrored)
    top = extremal_points(view.diagonal(), order, ExtremalMode.MAX)
    floor = weak_max_floor(view, order)
    home1, home2 = _HOMES[mirrored]
    sets = {"diagonal_extremal": top.points, "targets": floor.points}
    missing = translate_violations(floor, top, order, "minus")
    if missing.size:
        sign = "+" if mirrored else "-"
        return ConclusionResult(theorem, fx.name, None, {**sets, "missing": floor.points[missing]},
                                failure=f"{len(missing)} points of {home2} are outside {home1} {sign} S")
    kind = "subset_plus" if mirrored else "subset_minus"
    relation = ConeRelation(kind, floor.points, top.points, cone, eps_cone=cone.eps_cone)
    cert = MinimaxCertificate(theorem, top.points, floor.points, relation, home1, home2, top, floor)
    return ConclusionResult(theorem, fx.name, cert, sets)


def verify_minimax(
    fx: SetValuedFixture, cone: Cone, theorem: str, cfg: Optional[ToleranceConfig] = None
) -> ConclusionResult:
    if theorem not in CONCLUSIONS:
        raise TheoremError(f"unknown conclusion '{theorem}'; known: {', '.join(CONCLUSIONS)}")
    _require_square(fx)
    cone, cfg = _tuned(cone, cfg)
    if fx.codomain_dim != cone.dim:
        raise TheoremError(f"cone in R^{cone.dim} for {fx.name} with values in R^{fx.codomain_dim}")
    mirrored = theorem in ("thm41_ii", "thm46")
    if theorem in ("thm41_i", "thm41_ii"):
        result = _pair_conclusion(theorem, fx, cone, mirrored)
    else:
        result = _inclusion_conclusion(theorem, fx, cone, mirrored)
    result.notes.append("closures of the unions are not taken on a finite grid")
    if result.certificate is not None:
        problems = result.certificate.problems()
        if problems:
            raise TheoremError(f"certificate for {theorem} on {fx.name} fails its re-check: {problems}")
        logger.info("%s on %s: certificate z1=%s z2=%s", theorem, fx.name,
                    to_jsonable(result.certificate.z1), to_jsonable(result.certificate.z2))
    else:
        logger.info("%s on %s: %s", theorem, fx.name, result.failure)
    return result


@dataclass(frozen=True)
class Hypothesis:
    kind: PropertyKind
    arg: Argument = Argument.FIRST
    polarity: Polarity = Polarity.CONVEX
    # informational hypotheses are reported but do not decide the outcome
    required: bool = True

    def run(self, fx: SetValuedFixture, cone: Cone, cfg: ToleranceConfig) -> Verdict:
        return run_check(fx, cone, self.kind, cfg, self.arg, self.polarity)

    def label(self) -> str:
        return f"{self.kind.value}({self.arg.value}, {self.polarity.value})"


@dataclass(frozen=True)
class TheoremSpec:
    id: str
    conclusion: str
    hypotheses: Tuple[Hypothesis, ...]
    diagonal: Optional[str] = None
    requires: str = ""
    description: str = ""


K = PropertyKind
FIRST, SECOND = Argument.FIRST, Argument.SECOND
CONVEX, CONCAVE = Polarity.CONVEX, Polarity.CONCAVE


def _pair_bundle(first_side: bool, kinds: Dict[str, PropertyKind]) -> Tuple[Hypothesis, ...]:
    out = []
    if "transfer" in kinds:
        out.append(Hypothesis(kinds["transfer"], FIRST, CONVEX) if first_side
                   else Hypothesis(kinds["transfer"], SECOND, CONCAVE))
    if "pair" in kinds:
        out.append(Hypothesis(kinds["pair"], SECOND, CONCAVE) if first_side
                   else Hypothesis(kinds["pair"], FIRST, CONVEX))
    if "slice" in kinds:
        out.append(Hypothesis(kinds["slice"], FIRST, CONCAVE) if first_side
                   else Hypothesis(kinds["slice"], SECOND, CONVEX))
    return tuple(out)


def _gamma_bundle(first_side: bool, with_weak_mu: bool) -> Tuple[Hypothesis, ...]:
    out = []
    if with_weak_mu:
        out.append(Hypothesis(K.TRANSFER_WEAK_MU_V, FIRST, CONVEX) if first_side
                   else Hypothesis(K.TRANSFER_WEAK_MU_V, SECOND, CONCAVE))
    out.append(Hypothesis(K.TRANSFER_PROPERLY_III, FIRST, CONCAVE) if first_side
               else Hypothesis(K.TRANSFER_PROPERLY_III, SECOND, CONVEX))
    out.append(Hypothesis(K.GAMMA if first_side else K.GAMMA_PRIME))
    return tuple(out)


def _weakly_z_bundle(first_side: bool) -> Tuple[Hypothesis, ...]:
    arg, polarity = (FIRST, CONVEX) if first_side else (SECOND, CONCAVE)
    return (Hypothesis(K.WEAKLY_Z, arg, polarity), Hypothesis(K.ROW_DOMINATION, arg, polarity))


def _alpha(first_side: bool) -> Hypothesis:
    return Hypothesis(K.ALPHA if first_side else K.ALPHA_PRIME)


def _build_theorems() -> Dict[str, TheoremSpec]:
    specs = []
    set_valued = {"transfer": K.TRANSFER_MU_V, "pair": K.PAIR_PROPERLY_III, "slice": K.NATURALLY_QC_III}
    scalar = {"transfer": K.TRANSFER_MU_SCALAR, "pair": K.PAIR_PROPERLY_SCALAR, "slice": K.NATURAL_QC_SCALAR}
    for side, first_side in (("i", True), ("ii", False)):
        conclusion = "thm41_i" if first_side else "thm41_ii"
        diagonal = "max_w_side" if first_side else "min_w_side"
        weak_mu = (Hypothesis(K.TRANSFER_WEAK_MU_V, FIRST, CONVEX, required=False) if first_side
                   else Hypothesis(K.TRANSFER_WEAK_MU_V, SECOND, CONCAVE, required=False))
        specs += [
            TheoremSpec(f"thm41_{side}", conclusion, _pair_bundle(first_side, set_valued) + (weak_mu,),
                        diagonal, "simplex", "transfer mu-convexity, pair properness and natural slices"),
            TheoremSpec(f"thm42_{side}", conclusion,
                        (_alpha(first_side),) + _pair_bundle(first_side, {k: set_valued[k] for k in ("pair", "slice")}),
                        diagonal, "simplex", "condition alpha replaces transfer mu-convexity"),
            TheoremSpec(f"cor41_{side}", conclusion,
                        _pair_bundle(first_side, {k: set_valued[k] for k in ("pair", "slice")}),
                        diagonal, "simplex,real_valued", "real values"),
            TheoremSpec(f"cor42_{side}", conclusion, _pair_bundle(first_side, scalar),
                        diagonal, "simplex,single_valued", "single-valued maps"),
            TheoremSpec(f"thm43_{side}", conclusion, _gamma_bundle(first_side, True), diagonal, "",
                        "condition gamma with transfer proper quasi-concavity"),
            TheoremSpec(f"thm44_{side}", conclusion, (_alpha(first_side),) + _gamma_bundle(first_side, False),
                        diagonal, "", "condition alpha with condition gamma"),
            TheoremSpec(f"cor43_{side}", conclusion, _gamma_bundle(first_side, False), diagonal, "real_valued",
                        "real values with condition gamma"),
        ]
    specs += [
        TheoremSpec("thm45", "thm45", _weakly_z_bundle(True), None, "", "weakly z-convex for every target"),
        TheoremSpec("cor44", "thm45", _weakly_z_bundle(True), None, "single_valued", "single-valued maps"),
        TheoremSpec("thm46", "thm46", _weakly_z_bundle(False), None, "", "mirrored weakly z-convexity"),
        TheoremSpec("cor45", "thm46", _weakly_z_bundle(False), None, "single_valued", "single-valued maps"),
    ]
    return {s.id: s for s in specs}


THEOREMS: Dict[str, TheoremSpec] = _build_theorems()


def theorem_spec(theorem_id: str) -> TheoremSpec:
    spec = THEOREMS.get(theorem_id)
    if spec is None:
        raise TheoremError(f"unknown theorem '{theorem_id}'; known: {', '.join(THEOREMS)}")
    return spec


def _check_requirements(spec: TheoremSpec, fx: SetValuedFixture) -> None:
    needs = [r for r in spec.requires.split(",") if r]
    if "simplex" in needs and not (fx.domain.shape == "simplex" or fx.domain.dim == 1):
        raise TheoremError(f"{spec.id} needs a simplex domain, {fx.name} is a {fx.domain.shape}")
    if "real_valued" in needs and fx.codomain_dim != 1:
        raise TheoremError(f"{spec.id} is stated for real values, {fx.name} maps into R^{fx.codomain_dim}")
    if "single_valued" in needs and not fx.single_valued:
        raise TheoremError(f"{spec.id} is stated for single-valued maps, {fx.name} is set-valued")


@dataclass
class TheoremReport:
    theorem: str
    fixture: str
    hypotheses: List[Verdict]
    informational: List[Verdict]
    conclusion: ConclusionResult
    diagonal: Optional[Dict[str, Any]] = None
    diagonal_checked: bool = False

    @property
    def hypotheses_hold(self) -> bool:
        return all(v.passed for v in self.hypotheses)

    @property
    def status(self) -> str:
        if not self.conclusion.found:
            return NO_CERTIFICATE
        return CONSISTENT if self.hypotheses_hold else HYPOTHESES_NOT_MET

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": self.theorem,
            "fixture": self.fixture,
            "status": self.status,
            "hypotheses": [v.to_dict() for v in self.hypotheses],
            "informational": [v.to_dict() for v in self.informational],
            "conclusion": self.conclusion.to_dict(),
            "diagonal": to_jsonable(self.diagonal) if self.diagonal_checked else None,
        }


def run_theorem_suite(
    fx: SetValuedFixture, cone: Cone, theorem_id: str, cfg: Optional[ToleranceConfig] = None
) -> TheoremReport:
    """Every hypothesis of the theorem as a verdict, the diagonal lemma step, and the conclusion."""
    spec = theorem_spec(theorem_id)
    cfg = cfg or ToleranceConfig()
    _check_requirements(spec, fx)
    required, informational = [], []
    for hyp in spec.hypotheses:
        verdict = hyp.run(fx, cone, cfg)
        (required if hyp.required else informational).append(verdict)
        logger.info("%s hypothesis %s on %s: %s", spec.id, hyp.label(), fx.name, verdict.status.value)
    conclusion = verify_minimax(fx, cone, spec.conclusion, cfg)
    report = TheoremReport(spec.id, fx.name, required, informational, conclusion)
    if spec.diagonal is not None:
        report.diagonal = find_diagonal_witness(fx, cone, spec.diagonal, cfg)
        report.diagonal_checked = True
        if conclusion.certificate is not None:
            conclusion.certificate.diag_witness = report.diagonal
    logger.info("%s on %s: %s", spec.id, fx.name, report.status)
    return report
