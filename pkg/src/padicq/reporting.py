"""Audit records: two independently computed sides of an identity and the
certified valuation of their difference.

Report-only checks (conjectures, as-printed variants) carry verdict None and
never gate an exit status.  JSON output is canonical (sorted keys) so equal
runs are byte-equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "PASS"
FAIL = "FAIL"


@dataclass(frozen=True)
class AuditReport:
    identity: str
    params: dict
    lhs: str
    rhs: str
    diff_valuation: int | None  # None: the difference is exactly zero
    target: int
    verdict: str | None = field(default=None)

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL

    def to_json_dict(self) -> dict:
        d = {
            "identity": self.identity,
            "params": dict(self.params),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "diff_valuation": self.diff_valuation,
            "target": self.target,
        }
        if self.verdict is not None:
            d["verdict"] = self.verdict
        return d

    def text_line(self) -> str:
        ps = " ".join(f"{k}={v}" for k, v in self.params.items())
        dv = "exact" if self.diff_valuation is None else str(self.diff_valuation)
        tag = self.verdict if self.verdict is not None else "REPORT"
        return f"{tag:6s} {self.identity:12s} diff_val={dv:>6s} target={self.target} {ps}"


def verdict_for(diff_valuation: int | None, target: int) -> str:
    if diff_valuation is None or diff_valuation >= target:
        return PASS
    return FAIL


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"
