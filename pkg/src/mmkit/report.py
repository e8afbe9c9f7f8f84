"""Structured pass/fail/diagnostic records shared by the check functions."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
DIAGNOSTIC = "diagnostic"


@dataclass
class Check:
    """One named check with measured values and an optional witness.

    status "pass"/"fail" marks asserted statements; "diagnostic" marks
    measured-only entries that can never fail a suite. A failing check's
    witness must suffice to reproduce it (space document plus inputs).
    """

    name: str
    status: str
    measured: dict = field(default_factory=dict)
    witness: dict | None = None

    def to_jsonable(self) -> dict:
        doc = {"name": self.name, "status": self.status, "measured": dict(self.measured)}
        if self.witness is not None:
            doc["witness"] = self.witness
        return doc


@dataclass
class CheckReport:
    suite: str
    checks: list[Check]
    seed: int = 0
    runtime_ms: int = 0

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def to_jsonable(self) -> dict:
        return {
            "suite": self.suite,
            "checks": [c.to_jsonable() for c in sorted(self.checks, key=lambda c: c.name)],
            "seed": self.seed,
            "runtime_ms": self.runtime_ms,
        }
