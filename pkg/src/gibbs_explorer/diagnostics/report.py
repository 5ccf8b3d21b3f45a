"""
Test reports and the verification verdict policy

A report passes at |z| < 3. A suite of reports passes when no report is
flagged as failed, none reaches |z| >= 4, and at most one lands in
3 <= |z| < 4.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

from gibbs_explorer.core.estimate import Estimate

PASS_THRESHOLD = 3.0
HARD_THRESHOLD = 4.0
MARGINAL_ALLOWANCE = 1


@dataclass(frozen=True)
class TestReport:
    """One identity checked for one test function"""

    __test__ = False

    identity: str
    function_id: str
    lhs: Estimate
    rhs: Estimate
    failed: bool = False
    detail: str = ""

    @property
    def z_score(self) -> float:
        return self.lhs.z_score(self.rhs)

    @property
    def passed(self) -> bool:
        return not self.failed and abs(self.z_score) < PASS_THRESHOLD

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_row(self) -> Dict[str, Any]:
        return {
            "identity": self.identity,
            "function": self.function_id,
            "lhs": self.lhs.value,
            "lhs_stderr": self.lhs.stderr,
            "rhs": self.rhs.value,
            "rhs_stderr": self.rhs.stderr,
            "n": self.lhs.n,
            "z_score": self.z_score,
            "verdict": self.verdict,
            "failed": self.failed,
        }


@dataclass
class VerificationSummary:
    total: int
    passed_count: int
    marginal: List[str] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)
    max_abs_z: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures and len(self.marginal) <= MARGINAL_ALLOWANCE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": "pass" if self.passed else "fail",
            "total": self.total,
            "passed": self.passed_count,
            "marginal": self.marginal,
            "failures": self.failures,
            "max_abs_z": self.max_abs_z,
        }


def summarize_reports(reports: Sequence[TestReport]) -> VerificationSummary:
    summary = VerificationSummary(total=len(reports), passed_count=sum(r.passed for r in reports))
    for report in reports:
        label = f"{report.identity}:{report.function_id}"
        z = abs(report.z_score)
        if report.failed or math.isnan(z) or z >= HARD_THRESHOLD:
            summary.failures.append(label)
        elif z >= PASS_THRESHOLD:
            summary.marginal.append(label)
        if math.isfinite(z):
            summary.max_abs_z = max(summary.max_abs_z, z)
    return summary
