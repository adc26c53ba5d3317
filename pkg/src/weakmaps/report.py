"""Uniform reporting for equation-level checks.

Every validator in this package appends to a CheckReport: a flat list of
named equations together with the object or arrow they were tested at and
a PASS / FAIL / TRUNCATION-EXEMPT status.  Reports render one line per
equation and mirror to JSON.  Ordering is exactly insertion order, so a
validator that iterates deterministically yields byte-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "PASS"
FAIL = "FAIL"
EXEMPT = "TRUNCATION-EXEMPT"


@dataclass
class Check:
    name: str
    subject: str
    status: str
    lhs: str = ""
    rhs: str = ""

    def line(self) -> str:
        if self.status == FAIL:
            return f"EQ {self.name} @ {self.subject} : FAIL(lhs={self.lhs}, rhs={self.rhs})"
        return f"EQ {self.name} @ {self.subject} : {self.status}"


@dataclass
class CheckReport:
    checks: list[Check] = field(default_factory=list)

    def record(self, name, subject, ok, lhs="", rhs=""):
        status = PASS if ok else FAIL
        # values are only kept for failures; passing lines stay short
        self.checks.append(
            Check(name, subject, status, "" if ok else str(lhs), "" if ok else str(rhs))
        )
        return ok

    def eq(self, name, subject, lhs, rhs):
        """Record lhs == rhs under `name`, keeping reprs on failure."""
        return self.record(name, subject, lhs == rhs, lhs, rhs)

    def exempt(self, name, subject):
        self.checks.append(Check(name, subject, EXEMPT))

    def merge(self, other: "CheckReport"):
        self.checks.extend(other.checks)
        return self

    @property
    def ok(self) -> bool:
        return not any(c.status == FAIL for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def counts(self):
        n = {PASS: 0, FAIL: 0, EXEMPT: 0}
        for c in self.checks:
            n[c.status] += 1
        return n

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]

    def summary_line(self) -> str:
        n = self.counts()
        return (
            f"SUMMARY: checks={len(self.checks)} pass={n[PASS]}"
            f" fail={n[FAIL]} exempt={n[EXEMPT]}"
        )

    def to_json(self) -> dict:
        return {
            "checks": [
                {
                    "name": c.name,
                    "subject": c.subject,
                    "status": c.status,
                    **({"lhs": c.lhs, "rhs": c.rhs} if c.status == FAIL else {}),
                }
                for c in self.checks
            ],
            "summary": {k.lower(): v for k, v in self.counts().items()},
            "ok": self.ok,
        }
