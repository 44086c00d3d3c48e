"""
Pydantic models for verification reports.
"""
import math
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field

from app.constants import CheckStatus

ReportValue = Union[float, int, str]


class CheckResult(BaseModel):
    """One verification check."""
    name: str = Field(..., description="Unique check name")
    reference: str = Field(..., description="Short quotation locating the check")
    residual: float = Field(..., description="Measured residual")
    tolerance: float = Field(..., description="Pass threshold")
    status: CheckStatus = Field(..., description="pass, fail, or reported")
    detail: Optional[str] = Field(None, description="Free-text context")

    @classmethod
    def evaluate(
        cls,
        name: str,
        reference: str,
        residual: float,
        tolerance: float,
        detail: Optional[str] = None,
    ) -> "CheckResult":
        """Build a pass/fail check; NaN residuals fail."""
        passed = math.isfinite(residual) and residual <= tolerance
        return cls(
            name=name,
            reference=reference,
            residual=float(residual),
            tolerance=float(tolerance),
            status=CheckStatus.PASS if passed else CheckStatus.FAIL,
            detail=detail,
        )

    @classmethod
    def reported(
        cls, name: str, reference: str, residual: float, detail: Optional[str] = None
    ) -> "CheckResult":
        """An adjudication entry: recorded, never counted as a failure."""
        return cls(
            name=name,
            reference=reference,
            residual=float(residual),
            tolerance=float("nan"),
            status=CheckStatus.REPORTED,
            detail=detail,
        )

    @property
    def failed(self) -> bool:
        return self.status == CheckStatus.FAIL


class ReportDocument(BaseModel):
    """Machine-readable summary of one command run."""
    command: str = Field(..., description="Sub-command that produced the report")
    seed: int = Field(..., description="Random seed of the run")
    units: str = Field(..., description="Unit system and constants")
    checks: List[CheckResult] = Field(default_factory=list)
    values: Dict[str, ReportValue] = Field(default_factory=dict, description="Headline numbers")
    notes: List[str] = Field(default_factory=list, description="Adjudication notes")
    outputs: List[str] = Field(default_factory=list, description="Files written by the run")

    @property
    def failed_checks(self) -> List[CheckResult]:
        return [c for c in self.checks if c.failed]

    @property
    def passed(self) -> bool:
        return not self.failed_checks

    @property
    def status(self) -> str:
        return CheckStatus.PASS.value if self.passed else CheckStatus.FAIL.value

    def merge(self, other: "ReportDocument") -> "ReportDocument":
        """Append another document's checks, values, notes and outputs (first name wins)."""
        names = {c.name for c in self.checks}
        checks = self.checks + [c for c in other.checks if c.name not in names]
        notes = self.notes + [n for n in other.notes if n not in self.notes]
        values = {**other.values, **self.values}
        return self.model_copy(
            update={
                "checks": checks,
                "values": values,
                "notes": notes,
                "outputs": self.outputs + other.outputs,
            }
        )
