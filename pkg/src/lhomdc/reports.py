"""Small check-log container shared by the verification reports."""
from __future__ import annotations

from dataclasses import dataclass, field

SCHEMA = 1


@dataclass
class CheckLog:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    def record(self, ok: bool, **payload) -> bool:
        self.checked += 1
        if not ok:
            self.failures.append(payload)
        return ok

    def tally(self, ok: bool, describe) -> bool:
        """Like ``record`` but builds the failure payload only when needed."""
        self.checked += 1
        if not ok:
            self.failures.append(describe())
        return ok

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self, max_failures: int = 20) -> dict:
        return {"check": self.name, "checked": self.checked, "passed": self.ok,
                "failures": self.failures[:max_failures], "n_failures": len(self.failures)}
