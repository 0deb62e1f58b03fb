"""Deterministic command reports, rendered as JSON or plain text."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def digest(*chunks: str | bytes) -> str:
    h = hashlib.sha256()
    for c in chunks:
        h.update(c.encode() if isinstance(c, str) else c)
        h.update(b"\0")
    return h.hexdigest()[:16]


@dataclass
class Report:
    command: str
    inputs_digest: str = ""
    results: list[dict[str, Any]] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)
    exit_status: int = EXIT_OK
    figures: list[str] = field(default_factory=list)

    def add(self, check: str, passed: bool, **info: Any) -> None:
        self.results.append({"check": check, "passed": bool(passed), **info})
        if not passed and self.exit_status == EXIT_OK:
            self.exit_status = EXIT_CHECK_FAILED

    @property
    def ok(self) -> bool:
        return all(r["passed"] for r in self.results)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"command": self.command, "inputs_digest": self.inputs_digest,
                               "exit_status": self.exit_status, "results": self.results}
        if self.data:
            out["data"] = self.data
        if self.figures:
            out["figures"] = self.figures
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.command}  [{self.inputs_digest}]"]
        for r in self.results:
            mark = "PASS" if r["passed"] else "FAIL"
            extra = {k: v for k, v in r.items() if k not in ("check", "passed")}
            tail = ("  " + json.dumps(extra, sort_keys=True)) if extra else ""
            lines.append(f"  {mark}  {r['check']}{tail}")
        for key in sorted(self.data):
            lines.append(f"  {key}: {json.dumps(self.data[key], sort_keys=True)}")
        for path in self.figures:
            lines.append(f"  figure: {path}")
        lines.append(f"exit status {self.exit_status}")
        return "\n".join(lines) + "\n"
