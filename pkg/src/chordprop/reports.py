"""Machine-readable pass/fail reports shared by the audits and the algebra checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA = "chordprop/1"


@dataclass
class AuditReport:
    """``verdict`` is ``"pass"`` iff ``failures`` is empty."""

    kind: str
    checked: int
    failures: list[dict]
    extra: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "fail" if self.failures else "pass"

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        out = {
            "schema": SCHEMA,
            "kind": self.kind,
            "checked": self.checked,
            "failures": self.failures,
            "verdict": self.verdict,
        }
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict())


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
