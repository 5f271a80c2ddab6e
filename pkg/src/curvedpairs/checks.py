"""Pass/fail records shared by the verifiers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    ok: bool
    witness: Any = None

    def to_json(self):
        d = {"name": self.name, "status": "pass" if self.ok else "fail"}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class Report:
    command: str = ""
    instance_digest: str = ""
    checks: list[Check] = field(default_factory=list)

    def add(self, name, ok, witness=None) -> Check:
        c = Check(name, bool(ok), witness)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.ok, c.witness))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def first_failure(self):
        f = self.failures()
        return f[0] if f else None

    @property
    def counts(self) -> dict:
        n_pass = sum(c.ok for c in self.checks)
        return {"pass": n_pass, "fail": len(self.checks) - n_pass, "total": len(self.checks)}

    def to_json(self):
        return {
            "command": self.command,
            "instance_digest": self.instance_digest,
            "checks": [c.to_json() for c in self.checks],
            "counts": self.counts,
            "ok": self.ok,
        }

    def __bool__(self):
        return self.ok
