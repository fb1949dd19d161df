"""Per-check validation reports."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

DEFAULT_TOL = 1e-9


def default_tol() -> float:
    """Working tolerance, overridable through ``HOPFTRI_TOL``."""
    raw = os.environ.get("HOPFTRI_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        value = float(raw)
    except ValueError:
        return DEFAULT_TOL
    return value if value > 0 else DEFAULT_TOL


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    passed: bool
    note: str = ""


@dataclass
class ValidationReport:
    subject: str
    tol: float
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, name: str, residual: float, note: str = "") -> Check:
        residual = float(residual)
        check = Check(name, residual, bool(residual < self.tol), note)
        self.checks.append(check)
        return check

    def add_flag(self, name: str, ok: bool, note: str = "") -> Check:
        """Record a pass/fail condition that has no numeric residual."""
        check = Check(name, 0.0 if ok else float("inf"), ok, note)
        self.checks.append(check)
        return check

    def extend(self, other: ValidationReport, prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.residual, c.passed, c.note))
        self.notes.extend(prefix + n for n in other.notes)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: object) -> bool:
        return any(c.name == name for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "tol": self.tol,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "residual": c.residual, "passed": c.passed, "note": c.note}
                for c in self.checks
            ],
            "notes": list(self.notes),
        }

    def __str__(self) -> str:
        width = max((len(c.name) for c in self.checks), default=4)
        lines = [f"{self.subject}  (tol {self.tol:g})"]
        for c in self.checks:
            status = "ok  " if c.passed else "FAIL"
            tail = f"  {c.note}" if c.note else ""
            lines.append(f"  {status} {c.name:<{width}}  {c.residual:.3e}{tail}")
        lines.extend(f"  note: {n}" for n in self.notes)
        lines.append("PASSED" if self.passed else "FAILED")
        return "\n".join(lines)
