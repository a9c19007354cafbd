"""Command reports: a flat, ordered list of ``key: value`` records.

The structured form is one record per line, ``key: value``, with the first
line ``report: <command>``.  Keys are lowercase identifiers; values are single
lines.  ``parse_structured`` inverts ``Report.structured`` exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

_KEY = re.compile(r"^[a-z][a-z0-9_.-]*$")


@dataclass
class Report:
    command: str
    items: list[tuple[str, str]] = field(default_factory=list)

    def add(self, key: str, value) -> Report:
        if not _KEY.match(key):
            raise ValueError(f"bad report key {key!r}")
        text = str(value)
        if "\n" in text:
            raise ValueError("report values are single lines")
        self.items.append((key, text))
        return self

    def get(self, key: str) -> list[str]:
        return [v for k, v in self.items if k == key]

    def first(self, key: str) -> str | None:
        vals = self.get(key)
        return vals[0] if vals else None

    def structured(self) -> str:
        return "\n".join([f"report: {self.command}"] + [f"{k}: {v}" for k, v in self.items]) + "\n"

    def text(self) -> str:
        width = max((len(k) for k, _ in self.items), default=0)
        return "\n".join(f"{k.replace('_', ' '):<{width}}  {v}" for k, v in self.items) + "\n"


def parse_structured(text: str) -> Report:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("report: "):
        raise ValueError("structured report must start with 'report: <command>'")
    rep = Report(lines[0][len("report: "):])
    for ln in lines[1:]:
        key, sep, val = ln.partition(": ")
        if not sep:
            if ln.endswith(":"):
                key, val = ln[:-1], ""
            else:
                raise ValueError(f"malformed report line {ln!r}")
        rep.add(key, val)
    return rep


def vec_text(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"
