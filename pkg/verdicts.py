"""Property identifiers and the verdict value type shared by every checker."""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

logger = logging.getLogger(__name__)


class CheckError(ValueError):
    """Rejected checker input: unknown kind, kind/argument mismatch, empty search space."""


class Status(str, Enum):
    REFUTED = "Refuted"
    NOT_REFUTED = "NotRefuted"
    CONFIRMED = "Confirmed"
    NOT_CONFIRMED = "NotConfirmed"

    @property
    def passed(self) -> bool:
        return self in (Status.NOT_REFUTED, Status.CONFIRMED)

    @property
    def conclusive(self) -> bool:
        """Refuted and Confirmed carry a witness; the other two only coverage."""
        return self in (Status.REFUTED, Status.CONFIRMED)


class Polarity(str, Enum):
    CONVEX = "convex"
    CONCAVE = "concave"


class Argument(str, Enum):
    FIRST = "first"
    SECOND = "second"


class PropertyKind(str, Enum):
    PROPERLY_QC_III = "properly_qc_iii"
    PROPERLY_QC_V = "properly_qc_v"
    NATURALLY_QC_III = "naturally_qc_iii"
    NATURALLY_QC_V = "naturally_qc_v"
    S_QC = "s_qc"
    QC = "qc"
    NATURAL_QC_SCALAR = "natural_qc_scalar"
    WCG = "wcg"
    WNQ = "wnq"
    TRANSFER_MU_V = "transfer_mu_v"
    TRANSFER_MU_III = "transfer_mu_iii"
    TRANSFER_WEAK_MU_V = "transfer_weak_mu_v"
    TRANSFER_WEAK_MU_III = "transfer_weak_mu_iii"
    TRANSFER_MU_SCALAR = "transfer_mu_scalar"
    PAIR_PROPERLY_III = "pair_properly_iii"
    PAIR_PROPERLY_V = "pair_properly_v"
    PAIR_PROPERLY_PLAIN = "pair_properly_plain"
    PAIR_PROPERLY_SCALAR = "pair_properly_scalar"
    TRANSFER_PROPERLY_III = "transfer_properly_iii"
    TRANSFER_PROPERLY_V = "transfer_properly_v"
    ALPHA = "alpha"
    ALPHA_PRIME = "alpha_prime"
    GAMMA = "gamma"
    GAMMA_PRIME = "gamma_prime"
    WEAKLY_Z = "weakly_z"
    ROW_DOMINATION = "row_domination"

    @property
    def existential(self) -> bool:
        """Kinds answered with Confirmed/NotConfirmed instead of NotRefuted/Refuted."""
        return self in EXISTENTIAL_KINDS

    @property
    def single_valued_only(self) -> bool:
        return self in (
            PropertyKind.NATURAL_QC_SCALAR,
            PropertyKind.TRANSFER_MU_SCALAR,
            PropertyKind.PAIR_PROPERLY_SCALAR,
        )


EXISTENTIAL_KINDS = frozenset({
    PropertyKind.WNQ,
    PropertyKind.ALPHA,
    PropertyKind.ALPHA_PRIME,
    PropertyKind.GAMMA,
    PropertyKind.GAMMA_PRIME,
    PropertyKind.WEAKLY_Z,
    PropertyKind.ROW_DOMINATION,
})


def parse_kind(kind) -> PropertyKind:
    try:
        return PropertyKind(kind)
    except ValueError:
        known = ", ".join(k.value for k in PropertyKind)
        raise CheckError(f"unknown property '{kind}'; known: {known}") from None


def to_jsonable(value: Any) -> Any:
    """Numpy arrays and scalars inside witnesses become plain lists and floats."""
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()] if value.ndim else float(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, Enum):
        return value.value
    return value


@dataclass
class Verdict:
    kind: PropertyKind
    status: Status
    fixture: str
    cone: str
    arg: Argument = Argument.FIRST
    polarity: Polarity = Polarity.CONVEX
    witness: Optional[Dict[str, Any]] = None
    coverage: Dict[str, int] = field(default_factory=dict)
    tolerance: Dict[str, Any] = field(default_factory=dict)
    options: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.status.conclusive and self.witness is None:
            raise CheckError(f"{self.status.value} verdict for {self.kind.value} needs a witness")
        self.witness = to_jsonable(self.witness) if self.witness is not None else None

    @property
    def passed(self) -> bool:
        return self.status.passed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "property": self.kind.value,
            "status": self.status.value,
            "fixture": self.fixture,
            "cone": self.cone,
            "arg": self.arg.value,
            "polarity": self.polarity.value,
            "witness": self.witness,
            "coverage": dict(self.coverage),
            "tolerance": dict(self.tolerance),
            "options": to_jsonable(self.options),
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Verdict":
        """Inverse of to_dict, for verdicts read back from a report or a tool call."""
        try:
            return cls(
                kind=parse_kind(data["property"]),
                status=Status(data["status"]),
                fixture=str(data.get("fixture", "")),
                cone=str(data.get("cone", "")),
                arg=Argument(data.get("arg", "first")),
                polarity=Polarity(data.get("polarity", "convex")),
                witness=data.get("witness"),
                coverage=dict(data.get("coverage") or {}),
                tolerance=dict(data.get("tolerance") or {}),
                options=dict(data.get("options") or {}),
                notes=list(data.get("notes") or []),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, CheckError):
                raise
            raise CheckError(f"not a verdict document: {exc}") from exc
