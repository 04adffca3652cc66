from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    """Outcome of one named check, with the witness data that justifies it."""

    check: str
    window: tuple[int, int] | None = None
    passed: bool = True
    witnesses: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    def fail(self, message: str) -> None:
        self.passed = False
        self.failures.append(message)

    def require(self, condition: bool, message: str) -> bool:
        if not condition:
            self.fail(message)
        return bool(condition)

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "window": list(self.window) if self.window is not None else None,
            "pass": self.passed,
            "witnesses": self.witnesses,
            "tables": self.tables,
        }
        if self.failures:
            out["failures"] = self.failures
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)

    def summary(self) -> str:
        head = f"{'PASS' if self.passed else 'FAIL'} {self.check}"
        if self.window is not None:
            head += f" window=({self.window[0]},{self.window[1]})"
        if self.failures:
            head += "\n" + "\n".join(f"  - {m}" for m in self.failures)
        return head
