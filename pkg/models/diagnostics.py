"""
Data models for the limit-theorem diagnostics report.
"""

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field

CheckStatus = Literal['pass', 'fail', 'inconclusive']


class CheckResult(BaseModel):
    """One named check: statistic compared against threshold.

    For conclusive checks, status is 'pass' exactly when statistic <= threshold.
    """

    name: str = Field(..., min_length=1)
    statistic: Optional[float] = None
    threshold: Optional[float] = None
    status: CheckStatus
    meta: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def compare(cls, name: str, statistic: float, threshold: float, **meta) -> 'CheckResult':
        """Conclusive result: pass iff statistic <= threshold."""
        status = 'pass' if statistic <= threshold else 'fail'
        return cls(name=name, statistic=float(statistic), threshold=float(threshold),
                   status=status, meta=meta)

    @classmethod
    def inconclusive(cls, name: str, reason: str, **meta) -> 'CheckResult':
        return cls(name=name, status='inconclusive', meta={'reason': reason, **meta})

    @property
    def passed(self) -> Optional[bool]:
        """True/False for conclusive checks, None when inconclusive."""
        if self.status == 'inconclusive':
            return None
        return self.status == 'pass'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'statistic': self.statistic,
            'threshold': self.threshold,
            'pass': self.passed,
            'meta': self.meta,
        }


class DiagnosticsReport(BaseModel):
    """Aggregate of independent checks."""

    checks: List[CheckResult] = Field(default_factory=list)

    def add(self, check: CheckResult) -> None:
        self.checks.append(check)

    @property
    def passed(self) -> bool:
        """True iff every conclusive check passed."""
        return all(c.passed for c in self.checks if c.passed is not None)

    @property
    def inconclusive(self) -> List[str]:
        return [c.name for c in self.checks if c.status == 'inconclusive']

    def get(self, name: str) -> Optional[CheckResult]:
        for check in self.checks:
            if check.name == name:
                return check
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {'checks': [c.to_dict() for c in self.checks]}
