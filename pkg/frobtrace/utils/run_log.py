"""
Structured log of verification checks.
Collects every identity or trace comparison run by a command, with metrics
(pass rate, worst deviation, counts per kind) for the summary line.
"""
import logging
import time
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)


class CheckKind(Enum):
    """Families of checks."""
    FIELD = "field"
    CHARACTER = "character"
    GAUSS_SUM = "gauss_sum"
    JACOBI_SUM = "jacobi_sum"
    DAVENPORT_HASSE = "davenport_hasse"
    TRANSFORMATION = "transformation"
    SPECIAL = "special"
    TRACE = "trace"


class CheckStatus(Enum):
    """Outcome of a check."""
    PASSED = "passed"
    FAILED = "failed"
    SKIPPED = "skipped"
    INFO = "info"


@dataclass
class CheckLog:
    """Log entry for one check (possibly aggregated over many inputs)."""
    name: str
    kind: CheckKind
    status: CheckStatus
    q: int
    cases: int
    max_deviation: float
    tolerance: float
    detail: str = ""
    execution_time_ms: Optional[int] = None

    def to_dict(self, timing: bool = False) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        data = asdict(self)
        data["kind"] = self.kind.value
        data["status"] = self.status.value
        if not timing:
            data.pop("execution_time_ms")
        return data


class VerificationLog:
    """In-memory collection of check entries."""

    def __init__(self):
        self.entries: List[CheckLog] = []

    def log_check(self, entry: CheckLog) -> None:
        self.entries.append(entry)
        level = logging.WARNING if entry.status is CheckStatus.FAILED else logging.DEBUG
        logger.log(level, "%s [%s] q=%d cases=%d max_dev=%.3e", entry.name, entry.status.value,
                   entry.q, entry.cases, entry.max_deviation)

    def record(
        self,
        name: str,
        kind: CheckKind,
        q: int,
        deviations: List[float],
        tolerance: float,
        detail: str = "",
        informational: bool = False,
        started: Optional[float] = None,
    ) -> CheckLog:
        """Aggregate a batch of deviations into one entry and log it."""
        worst = max(deviations) if deviations else 0.0
        if not deviations:
            status = CheckStatus.SKIPPED
        elif informational:
            status = CheckStatus.INFO
        else:
            status = CheckStatus.PASSED if worst < tolerance else CheckStatus.FAILED
        entry = CheckLog(
            name=name,
            kind=kind,
            status=status,
            q=q,
            cases=len(deviations),
            max_deviation=float(worst),
            tolerance=tolerance,
            detail=detail,
            execution_time_ms=None if started is None else int((time.time() - started) * 1000),
        )
        self.log_check(entry)
        return entry

    def get_failed_checks(self) -> List[CheckLog]:
        return [e for e in self.entries if e.status is CheckStatus.FAILED]

    def all_passed(self) -> bool:
        return not self.get_failed_checks()

    def calculate_metrics(self) -> Dict[str, Any]:
        """Totals, pass rate over pass/fail checks, worst deviation and counts per kind."""
        if not self.entries:
            return {
                "total_checks": 0,
                "passed": 0,
                "failed": 0,
                "skipped": 0,
                "informational": 0,
                "pass_rate": 0.0,
                "max_deviation": 0.0,
                "checks_by_kind": {},
            }

        counts = {status: 0 for status in CheckStatus}
        by_kind: Dict[str, int] = {}
        for entry in self.entries:
            counts[entry.status] += 1
            by_kind[entry.kind.value] = by_kind.get(entry.kind.value, 0) + 1

        decided = counts[CheckStatus.PASSED] + counts[CheckStatus.FAILED]
        graded = [e.max_deviation for e in self.entries
                  if e.status in (CheckStatus.PASSED, CheckStatus.FAILED)]
        return {
            "total_checks": len(self.entries),
            "passed": counts[CheckStatus.PASSED],
            "failed": counts[CheckStatus.FAILED],
            "skipped": counts[CheckStatus.SKIPPED],
            "informational": counts[CheckStatus.INFO],
            "pass_rate": (counts[CheckStatus.PASSED] / decided * 100) if decided else 0.0,
            "max_deviation": max(graded) if graded else 0.0,
            "checks_by_kind": by_kind,
        }
