"""Structured results for axiom and hypothesis checks.

Every verification in this library reports one of three outcomes per
identity: pass, fail (with a witness), or inconclusive when the grading
cutoff leaves the identity undecidable.  Truncation is never flattened
into pass or fail.
"""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


@dataclass
class CheckReport:
    name: str
    status: str
    window: str = ""
    witnesses: list = field(default_factory=list)
    details: str = ""

    def to_dict(self):
        return {
            "name": self.name,
            "status": self.status,
            "window": self.window,
            "witnesses": [_plain(w) for w in self.witnesses],
            "details": self.details,
        }


def _plain(x):
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


@dataclass
class ReportSet:
    checks: list = field(default_factory=list)

    def add(self, report: CheckReport):
        self.checks.append(report)
        return report

    def extend(self, other: "ReportSet"):
        self.checks.extend(other.checks)

    @property
    def all_pass(self) -> bool:
        return all(c.status == PASS for c in self.checks)

    @property
    def any_fail(self) -> bool:
        return any(c.status == FAIL for c in self.checks)

    @property
    def any_inconclusive(self) -> bool:
        return any(c.status == INCONCLUSIVE for c in self.checks)

    def by_name(self, name: str) -> CheckReport:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {
            "summary": {
                "pass": sum(c.status == PASS for c in self.checks),
                "fail": sum(c.status == FAIL for c in self.checks),
                "inconclusive": sum(c.status == INCONCLUSIVE for c in self.checks),
            },
            "checks": [c.to_dict() for c in self.checks],
        }
