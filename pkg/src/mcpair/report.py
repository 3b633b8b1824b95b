"""Check reports shared by the validators and the command line front end."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class Check:
    """One named verdict, with a witness description when it fails."""

    name: str
    ok: bool
    witness: Optional[str] = None

    def line(self) -> str:
        mark = "pass" if self.ok else "FAIL"
        tail = "" if self.ok or not self.witness else f"  [{self.witness}]"
        return f"{self.name}: {mark}{tail}"


@dataclass(frozen=True)
class ValidationReport:
    subject: str
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.ok)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self) -> list[str]:
        out = [f"{self.subject}: {'ok' if self.ok else 'FAILED'}"]
        out.extend("  " + c.line() for c in self.checks)
        return out


@dataclass
class ReportBuilder:
    subject: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, ok: bool, witness: Optional[str] = None):
        self.checks.append(Check(name, bool(ok), None if ok else witness))

    def build(self) -> ValidationReport:
        return ValidationReport(self.subject, tuple(self.checks))
