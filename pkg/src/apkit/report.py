"""Structured findings shared by the validator, the linter and the ingester."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum


class Severity(str, Enum):
    ERROR = "ERROR"
    WARNING = "WARNING"


@dataclass(frozen=True)
class Finding:
    severity: Severity
    rule: str
    path: str
    message: str

    def to_dict(self) -> dict:
        return {
            "severity": self.severity.value,
            "rule": self.rule,
            "path": self.path,
            "message": self.message,
        }


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def conformant(self) -> bool:
        return not any(f.severity is Severity.ERROR for f in self.findings)

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity is Severity.ERROR]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity is Severity.WARNING]

    def error(self, rule: str, path: str, message: str) -> None:
        self.findings.append(Finding(Severity.ERROR, rule, path, message))

    def warn(self, rule: str, path: str, message: str) -> None:
        self.findings.append(Finding(Severity.WARNING, rule, path, message))

    def extend(self, other: "ValidationReport") -> None:
        self.findings.extend(other.findings)

    def rules(self) -> list[str]:
        return [f.rule for f in self.findings]

    def to_dict(self) -> dict:
        return {
            "conformant": self.conformant,
            "findings": [f.to_dict() for f in self.findings],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "ValidationReport":
        return cls(
            [
                Finding(Severity(f["severity"]), f["rule"], f["path"], f["message"])
                for f in data.get("findings", [])
            ]
        )

    def to_text(self, color: bool = False) -> str:
        lines = []
        for f in self.findings:
            label = f.severity.value
            if color:
                code = "31" if f.severity is Severity.ERROR else "33"
                label = f"\x1b[{code}m{label}\x1b[0m"
            lines.append(f"{label} [{f.rule}] {f.path or '/'}: {f.message}")
        verdict = "conformant" if self.conformant else "NOT conformant"
        lines.append(
            f"{verdict} ({len(self.errors)} error(s), {len(self.warnings)} warning(s))"
        )
        return "\n".join(lines) + "\n"
