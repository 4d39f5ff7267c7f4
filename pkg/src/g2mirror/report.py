"""Check records and the versioned report document."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

SCHEMA_VERSION = "g2mirror-report/1"

PASS = "pass"
FAIL = "fail"
RECORDED = "recorded-assertion"
STATUSES = (PASS, FAIL, RECORDED)


@dataclass
class Check:
    """One verified (or recorded) claim.

    ``anchor`` names the mathematical statement being checked; ``witness``
    holds whatever data certifies it, or the counterexample on failure.
    """

    name: str
    status: str
    anchor: str
    witness: Any = None
    detail: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if not self.anchor:
            raise ValueError(f"check {self.name!r} has an empty anchor")

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    @classmethod
    def test(cls, name: str, ok: bool, anchor: str, witness=None, detail: str = "") -> "Check":
        return cls(name, PASS if ok else FAIL, anchor, witness, detail)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "witness": to_jsonable(self.witness),
            "detail": self.detail,
        }


def to_jsonable(obj):
    """Canonical JSON-ready structure; rationals become strings like ``"1/2"``."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((to_jsonable(x) for x in obj), key=lambda x: json.dumps(x, sort_keys=True))
    return str(obj)


@dataclass
class Report:
    command: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks: Iterable[Check]):
        self.checks.extend(checks)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> dict[str, int]:
        out = {s: 0 for s in STATUSES}
        for c in self.checks:
            out[c.status] += 1
        out["total"] = len(self.checks)
        return out

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "checks": [c.to_dict() for c in self.checks],
            "summary": self.summary(),
            "data": to_jsonable(self.data),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = [f"== {self.command} =="]
        for c in self.checks:
            tag = {PASS: "PASS", FAIL: "FAIL", RECORDED: "NOTE"}[c.status]
            line = f"[{tag}] {c.name}  ({c.anchor})"
            if c.detail:
                line += f"  -- {c.detail}"
            lines.append(line)
        for key, value in self.data.items():
            lines.append(f"{key}:")
            lines.extend("  " + ln for ln in _text_block(value))
        s = self.summary()
        lines.append(
            f"summary: {s[PASS]} pass, {s[FAIL]} fail, {s[RECORDED]} recorded, {s['total']} total"
        )
        return "\n".join(lines) + "\n"


def _text_block(value) -> list[str]:
    value = to_jsonable(value)
    if isinstance(value, dict):
        out = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                out.append(f"{k}:")
                out.extend("  " + ln for ln in _text_block(v))
            else:
                out.append(f"{k}: {_inline(v)}")
        return out
    if isinstance(value, list) and not _flat(value):
        out = []
        for v in value:
            block = _text_block(v)
            out.append("- " + block[0])
            out.extend("  " + ln for ln in block[1:])
        return out
    return [_inline(value)]


def _flat(v) -> bool:
    if isinstance(v, dict):
        return all(not isinstance(x, (dict, list)) for x in v.values())
    return all(not isinstance(x, dict) and (not isinstance(x, list) or _flat(x)) for x in v)


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_inline(x)}" for k, x in v.items()) + "}"
    return str(v)
