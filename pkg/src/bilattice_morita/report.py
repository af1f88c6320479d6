"""Law-by-law outcome reports shared by every checker."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class LawOutcome:
    law: str
    passed: bool
    counterexample: Any = None
    detail: str = ""

    def to_dict(self) -> dict:
        d = {"law": self.law, "passed": self.passed}
        if self.counterexample is not None:
            d["counterexample"] = _plain(self.counterexample)
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class Report:
    title: str
    outcomes: list[LawOutcome] = field(default_factory=list)

    def add(self, law: str, passed: bool, counterexample: Any = None, detail: str = "") -> bool:
        self.outcomes.append(LawOutcome(law, bool(passed), counterexample, detail))
        return bool(passed)

    def extend(self, other: Report, prefix: str = "") -> None:
        for o in other.outcomes:
            self.outcomes.append(LawOutcome(prefix + o.law, o.passed, o.counterexample, o.detail))

    @property
    def ok(self) -> bool:
        return all(o.passed for o in self.outcomes)

    def __bool__(self):
        return self.ok

    @property
    def failures(self) -> list[LawOutcome]:
        return [o for o in self.outcomes if not o.passed]

    def to_dict(self) -> dict:
        return {"title": self.title, "ok": self.ok, "outcomes": [o.to_dict() for o in self.outcomes]}

    def render(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.ok else 'FAIL'}"]
        for o in self.outcomes:
            line = f"  [{'ok' if o.passed else 'FAIL'}] {o.law}"
            if o.detail:
                line += f" ({o.detail})"
            if not o.passed and o.counterexample is not None:
                line += f" counterexample={_plain(o.counterexample)}"
            lines.append(line)
        return "\n".join(lines)


def _plain(x: Any) -> Any:
    """Coerce counterexample payloads into JSON-friendly values."""
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_plain(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if hasattr(x, "members"):
        return list(x.members)
    if hasattr(x, "pairs"):
        return [_plain(p) for p in x.pairs]
    return repr(x)
