"""
Validation Report
Findings produced by instance validation
"""
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


class Finding(BaseModel):
    code: str
    message: str
    entity: Optional[str] = None
    severity: Severity = Severity.ERROR

    def __str__(self):
        where = f"[{self.entity}] " if self.entity else ""
        return f"{self.severity.value}: {where}{self.message}"


class ValidationReport(BaseModel):
    """Errors block planning; warnings are informational"""

    findings: List[Finding] = Field(default_factory=list)
    warnings: List[Finding] = Field(default_factory=list)

    @property
    def is_clean(self) -> bool:
        return not self.findings

    def error(self, code: str, message: str, entity: Optional[str] = None):
        self.findings.append(Finding(code=code, message=message, entity=entity))

    def warn(self, code: str, message: str, entity: Optional[str] = None):
        self.warnings.append(Finding(code=code, message=message, entity=entity, severity=Severity.WARNING))

    def codes(self) -> List[str]:
        return [finding.code for finding in self.findings]

    def merge(self, other: "ValidationReport") -> "ValidationReport":
        self.findings.extend(other.findings)
        self.warnings.extend(other.warnings)
        return self

    def lines(self) -> List[str]:
        return [str(finding) for finding in self.findings + self.warnings]
