"""
Entry point for property checks: the kind registry, witness replay and the
one-way implications between kinds.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import pandas as pd

from cones import Cone
from config import ToleranceConfig
from convexity_checks import SINGLE_MAP_KINDS, check_single_map_convexity, check_wcg, check_wnq
from fixtures import SetValuedFixture
from sweeps import Sweep
from transfer_checks import (
    PAIR_KINDS,
    TRANSFER_MU_KINDS,
    TRANSFER_PROPERLY_KINDS,
    check_alpha,
    check_gamma,
    check_pair_properly,
    check_transfer_mu,
    check_transfer_properly,
)
from verdicts import Argument, CheckError, Polarity, PropertyKind, Verdict, parse_kind
from weakly_z import check_row_domination, check_weakly_z

logger = logging.getLogger(__name__)

Checker = Callable[[Sweep], Verdict]

CHECKERS: Dict[PropertyKind, Checker] = {
    **{kind: check_single_map_convexity for kind in SINGLE_MAP_KINDS},
    PropertyKind.WCG: check_wcg,
    PropertyKind.WNQ: check_wnq,
    **{kind: check_transfer_mu for kind in TRANSFER_MU_KINDS},
    **{kind: check_pair_properly for kind in PAIR_KINDS},
    **{kind: check_transfer_properly for kind in TRANSFER_PROPERLY_KINDS},
    PropertyKind.ALPHA: check_alpha,
    PropertyKind.ALPHA_PRIME: check_alpha,
    PropertyKind.GAMMA: check_gamma,
    PropertyKind.GAMMA_PRIME: check_gamma,
    PropertyKind.WEAKLY_Z: check_weakly_z,
    PropertyKind.ROW_DOMINATION: check_row_domination,
}

# kinds whose definition combines points of the other argument too
TWO_ARGUMENT_KINDS = frozenset(TRANSFER_MU_KINDS | PAIR_KINDS | TRANSFER_PROPERLY_KINDS | {
    PropertyKind.ALPHA, PropertyKind.ALPHA_PRIME, PropertyKind.GAMMA, PropertyKind.GAMMA_PRIME,
    PropertyKind.WEAKLY_Z, PropertyKind.ROW_DOMINATION,
})


def run_check(
    fx: SetValuedFixture,
    cone: Cone,
    kind,
    cfg: Optional[ToleranceConfig] = None,
    arg=Argument.FIRST,
    polarity=Polarity.CONVEX,
    **options: Any,
) -> Verdict:
    """Run one property check; `options` carry explicit tuples, cases, lambdas, curves or targets."""
    kind = parse_kind(kind)
    cfg = cfg or ToleranceConfig()
    try:
        arg, polarity = Argument(arg), Polarity(polarity)
    except ValueError as exc:
        raise CheckError(str(exc)) from None
    if kind.single_valued_only and not fx.single_valued:
        raise CheckError(f"{kind.value} needs a single-valued fixture, {fx.name} is set-valued")
    if kind in TWO_ARGUMENT_KINDS and fx.unary:
        raise CheckError(f"{kind.value} needs a map of two arguments, {fx.name} has one")
    options = {k: v for k, v in options.items() if v is not None}
    sw = Sweep(kind, fx, cone, cfg, arg, polarity, options)
    logger.info("checking %s on %s (%s, %s)", kind.value, fx.name, arg.value, polarity.value)
    return CHECKERS[kind](sw)


def replay_options(verdict: Verdict) -> Dict[str, Any]:
    """Options that re-run exactly the cases recorded in the witness of `verdict`."""
    if verdict.witness is None:
        raise CheckError(f"{verdict.status.value} verdict for {verdict.kind.value} has no witness to replay")
    options = {k: v for k, v in verdict.options.items() if k not in ("cases", "tuples")}
    if "case" in verdict.witness:
        options["cases"] = [verdict.witness["case"]]
    elif "cases" in verdict.witness:
        options["cases"] = verdict.witness["cases"]
    else:
        raise CheckError(f"witness of {verdict.kind.value} records no case")
    return options


def replay_verdict(verdict: Verdict, fx: SetValuedFixture, cone: Cone, cfg: Optional[ToleranceConfig] = None) -> Verdict:
    replayed = run_check(fx, cone, verdict.kind, cfg, verdict.arg, verdict.polarity, **replay_options(verdict))
    if replayed.status is not verdict.status:
        logger.warning("replay of %s on %s gave %s, recorded %s", verdict.kind.value, fx.name,
                       replayed.status.value, verdict.status.value)
    return replayed


@dataclass(frozen=True)
class CheckSpec:
    kind: PropertyKind
    arg: Argument = Argument.FIRST
    options: Tuple[Tuple[str, Any], ...] = ()

    def run(self, fx: SetValuedFixture, cone: Cone, cfg: ToleranceConfig, polarity: Polarity) -> Verdict:
        return run_check(fx, cone, self.kind, cfg, self.arg, polarity, **dict(self.options))

    def label(self) -> str:
        return f"{self.kind.value}({self.arg.value})"


@dataclass(frozen=True)
class ImplicationRule:
    name: str
    conclusion: CheckSpec
    premise: Optional[CheckSpec] = None
    # structural premise, used when no checker states it
    requires: Optional[Callable[[SetValuedFixture], bool]] = field(default=None, compare=False)
    description: str = ""


@dataclass
class ImplicationResult:
    rule: ImplicationRule
    premise: Optional[Verdict]
    conclusion: Optional[Verdict]
    applicable: bool

    @property
    def consistent(self) -> bool:
        if not self.applicable or self.conclusion is None:
            return True
        return self.conclusion.passed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rule": self.rule.name,
            "applicable": self.applicable,
            "premise": self.premise.status.value if self.premise else None,
            "conclusion": self.conclusion.status.value if self.conclusion else None,
            "consistent": self.consistent,
        }


def _real_valued(fx: SetValuedFixture) -> bool:
    return fx.codomain_dim == 1 and not fx.unary


IMPLICATIONS: List[ImplicationRule] = [
    ImplicationRule(
        "wcg_implies_wnq",
        premise=CheckSpec(PropertyKind.WCG),
        conclusion=CheckSpec(PropertyKind.WNQ, options=(("curves", ({"name": "identity", "params": []},)),)),
        description="a weakly convex graph keeps the segment selections, so identity g works",
    ),
    ImplicationRule(
        "pair_properly_v_implies_transfer_weak_mu_v",
        premise=CheckSpec(PropertyKind.PAIR_PROPERLY_V),
        conclusion=CheckSpec(PropertyKind.TRANSFER_WEAK_MU_V),
    ),
    ImplicationRule(
        "naturally_qc_iii_implies_transfer_properly_iii",
        premise=CheckSpec(PropertyKind.NATURALLY_QC_III),
        conclusion=CheckSpec(PropertyKind.TRANSFER_PROPERLY_III),
        description="naturally quasi-convex slices F(., y) for every y",
    ),
    ImplicationRule(
        "transfer_properly_v_implies_transfer_weak_mu_v",
        premise=CheckSpec(PropertyKind.TRANSFER_PROPERLY_V),
        conclusion=CheckSpec(PropertyKind.TRANSFER_WEAK_MU_V),
    ),
    ImplicationRule(
        "real_valued_implies_transfer_mu_v",
        requires=_real_valued,
        conclusion=CheckSpec(PropertyKind.TRANSFER_MU_V),
        description="real values with compact row unions",
    ),
]


def implication_rule(name: str) -> ImplicationRule:
    for rule in IMPLICATIONS:
        if rule.name == name:
            return rule
    known = ", ".join(r.name for r in IMPLICATIONS)
    raise CheckError(f"unknown implication '{name}'; known: {known}")


def check_implication(
    fx: SetValuedFixture,
    cone: Cone,
    rule: ImplicationRule,
    cfg: Optional[ToleranceConfig] = None,
    polarity=Polarity.CONVEX,
) -> ImplicationResult:
    cfg = cfg or ToleranceConfig()
    polarity = Polarity(polarity)
    premise = None
    if rule.requires is not None and not rule.requires(fx):
        return ImplicationResult(rule, None, None, applicable=False)
    if rule.premise is not None:
        try:
            premise = rule.premise.run(fx, cone, cfg, polarity)
        except CheckError as exc:
            logger.info("%s does not apply to %s: %s", rule.name, fx.name, exc)
            return ImplicationResult(rule, None, None, applicable=False)
        if not premise.passed:
            return ImplicationResult(rule, premise, None, applicable=False)
    try:
        conclusion = rule.conclusion.run(fx, cone, cfg, polarity)
    except CheckError as exc:
        logger.info("%s cannot be concluded on %s: %s", rule.name, fx.name, exc)
        return ImplicationResult(rule, premise, None, applicable=False)
    result = ImplicationResult(rule, premise, conclusion, applicable=True)
    if not result.consistent:
        logger.warning("%s: premise holds on %s but %s is %s", rule.name, fx.name,
                       rule.conclusion.label(), conclusion.status.value)
    return result


def check_implications(
    fx: SetValuedFixture,
    cone: Cone,
    cfg: Optional[ToleranceConfig] = None,
    polarity=Polarity.CONVEX,
    rules: Optional[List[ImplicationRule]] = None,
) -> List[ImplicationResult]:
    return [check_implication(fx, cone, rule, cfg, polarity) for rule in (rules or IMPLICATIONS)]


def implications_table(results: List[ImplicationResult]) -> pd.DataFrame:
    return pd.DataFrame([r.to_dict() for r in results],
                        columns=["rule", "applicable", "premise", "conclusion", "consistent"])
