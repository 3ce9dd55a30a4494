"""
Run reports: one structured document per CLI run, rendered as JSON or Markdown.
"""
import json
import logging
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

import pandas as pd
from pydantic import BaseModel, Field

from checkers import ImplicationResult
from minimax import ConclusionResult, TheoremReport
from verdicts import Verdict, to_jsonable

logger = logging.getLogger(__name__)

VERSION = "0.1.0"

FORMATS = ("json", "markdown")


class CheckEntry(BaseModel):
    id: str
    action: str = "check"
    status: str
    passed: bool
    arg: Optional[str] = None
    polarity: Optional[str] = None
    witness: Optional[Any] = None
    coverage: Dict[str, int] = Field(default_factory=dict)
    details: Dict[str, Any] = Field(default_factory=dict)
    notes: List[str] = Field(default_factory=list)
    wall_time: float = 0.0
    expected: Optional[str] = None

    @property
    def matches(self) -> Optional[bool]:
        return None if self.expected is None else self.status == self.expected


class RunReport(BaseModel):
    version: str = VERSION
    fixture: str
    cone: str
    config: Dict[str, Any] = Field(default_factory=dict)
    checks: List[CheckEntry] = Field(default_factory=list)
    created: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    @property
    def overall(self) -> str:
        if any(c.expected is not None for c in self.checks):
            return "pass" if all(c.matches is not False for c in self.checks) else "fail"
        return "pass" if all(c.passed for c in self.checks) else "fail"

    def add(self, entry: CheckEntry) -> "RunReport":
        self.checks.append(entry)
        logger.debug("report entry %s: %s", entry.id, entry.status)
        return self

    def to_dict(self, stable: bool = False) -> Dict[str, Any]:
        """With `stable`, the timestamp and wall times are left out so repeated runs compare byte for byte."""
        exclude = {"created": True, "checks": {"__all__": {"wall_time"}}} if stable else None
        data = self.model_dump(exclude=exclude)
        data["overall"] = self.overall
        return to_jsonable(data)

    def table(self, stable: bool = False) -> pd.DataFrame:
        return checks_table(self.checks, stable)


def entry_from_verdict(verdict: Verdict, wall_time: float = 0.0, expected: Optional[str] = None) -> CheckEntry:
    return CheckEntry(
        id=verdict.kind.value,
        status=verdict.status.value,
        passed=verdict.passed,
        arg=verdict.arg.value,
        polarity=verdict.polarity.value,
        witness=verdict.witness,
        coverage=verdict.coverage,
        details={"options": to_jsonable(verdict.options), "tolerance": verdict.tolerance},
        notes=verdict.notes,
        wall_time=wall_time,
        expected=expected,
    )


def entry_from_theorem(report: TheoremReport, wall_time: float = 0.0, expected: Optional[str] = None) -> CheckEntry:
    data = report.to_dict()
    return CheckEntry(
        id=report.theorem,
        action="verify",
        status=report.status,
        passed=report.status == "consistent-with-theorem",
        witness=data["conclusion"]["certificate"],
        details={"hypotheses": data["hypotheses"], "informational": data["informational"],
                 "conclusion": data["conclusion"], "diagonal": data["diagonal"]},
        notes=report.conclusion.notes,
        wall_time=wall_time,
        expected=expected,
    )


def entry_from_conclusion(result: ConclusionResult, wall_time: float = 0.0, expected: Optional[str] = None) -> CheckEntry:
    data = result.to_dict()
    return CheckEntry(
        id=result.theorem,
        action="conclusion",
        status="certificate" if result.found else "no-certificate",
        passed=result.found,
        witness=data["certificate"],
        details={"sets": data["sets"], "failure": data["failure"]},
        notes=result.notes,
        wall_time=wall_time,
        expected=expected,
    )


def entry_from_diagonal(mode: str, witness: Optional[Dict[str, Any]], wall_time: float = 0.0,
                        expected: Optional[str] = None) -> CheckEntry:
    return CheckEntry(
        id=mode,
        action="diagonal",
        status="found" if witness is not None else "absent",
        passed=witness is not None,
        witness=to_jsonable(witness),
        wall_time=wall_time,
        expected=expected,
    )


def entry_from_implication(result: ImplicationResult, wall_time: float = 0.0) -> CheckEntry:
    data = result.to_dict()
    return CheckEntry(
        id=result.rule.name,
        action="implication",
        status="consistent" if result.consistent else "inconsistent",
        passed=result.consistent,
        witness=result.conclusion.witness if result.conclusion is not None else None,
        details=data,
        wall_time=wall_time,
    )


def checks_table(entries: List[CheckEntry], stable: bool = False) -> pd.DataFrame:
    rows = [{
        "id": e.id,
        "action": e.action,
        "arg": e.arg or "",
        "polarity": e.polarity or "",
        "status": e.status,
        "expected": e.expected or "",
        "ok": e.matches if e.expected is not None else e.passed,
        "seconds": round(e.wall_time, 3),
    } for e in entries]
    df = pd.DataFrame(rows, columns=["id", "action", "arg", "polarity", "status", "expected", "ok", "seconds"])
    return df.drop(columns="seconds") if stable else df


def markdown_table(df: pd.DataFrame) -> str:
    header = "| " + " | ".join(df.columns) + " |"
    rule = "|" + "|".join("---" for _ in df.columns) + "|"
    body = ["| " + " | ".join(str(v) for v in row) + " |" for row in df.itertuples(index=False)]
    return "\n".join([header, rule, *body])


def render_markdown(report: RunReport, stable: bool = False) -> str:
    lines = [
        f"# Verification report: {report.fixture}",
        "",
        f"- cone: `{report.cone}`",
        f"- version: {report.version}",
        f"- overall: **{report.overall}**",
        "",
    ]
    if report.checks:
        lines += [markdown_table(report.table(stable)), ""]
    for entry in report.checks:
        if entry.witness is None and not entry.notes:
            continue
        lines.append(f"## {entry.id} ({entry.action})")
        lines.extend(f"- {note}" for note in entry.notes)
        if entry.witness is not None:
            lines += ["", "```json", json.dumps(to_jsonable(entry.witness), indent=2), "```"]
        lines.append("")
    return "\n".join(lines)


def render(report: RunReport, fmt: str = "json", stable: bool = False) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(stable), indent=2)
    if fmt == "markdown":
        return render_markdown(report, stable)
    raise ValueError(f"unknown report format '{fmt}'; use one of {FORMATS}")
