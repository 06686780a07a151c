"""Check results and deterministic JSON reports."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
UNDETERMINED = "undetermined"

EXIT_CODES = {PASS: 0, FAIL: 1, UNDETERMINED: 2}
EXIT_USAGE = 64


@dataclass
class Check:
    name: str
    status: str
    residual: str = "0"
    reason: str = ""
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status in (PASS, SKIPPED)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "status": self.status, "residual": self.residual}
        if self.reason:
            out["reason"] = self.reason
        if self.details:
            out["details"] = self.details
        return out


@dataclass
class Report:
    title: str
    config: dict[str, Any] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.residual, c.reason, c.details))

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    @property
    def status(self) -> str:
        statuses = {c.status for c in self.checks}
        if FAIL in statuses:
            return FAIL
        if UNDETERMINED in statuses:
            return UNDETERMINED
        return PASS

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "status": self.status,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def combine(title: str, reports: list[Report], config: dict | None = None) -> Report:
    out = Report(title, dict(config or {}))
    for r in reports:
        out.extend(r, prefix=r.title + ":")
    return out


__all__ = ["Check", "Report", "combine", "PASS", "FAIL", "SKIPPED", "UNDETERMINED", "EXIT_CODES", "EXIT_USAGE"]
