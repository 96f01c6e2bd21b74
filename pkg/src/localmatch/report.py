"""Machine-readable outcome records.

Every decision the CLI makes is emitted as a ``VerdictReport``.  JSON keys are
exactly the field names; serialization is sorted and compact so two runs on
the same input produce the same bytes.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Any

from . import __version__

VERDICTS = ("true", "false", "holds", "fails")


@dataclass
class VerdictReport:
    command: str
    instance: dict[str, Any]
    verdict: str
    certificate: Any = None
    elapsed_ms: int = 0
    seed: int = 0
    engine_version: str = field(default=__version__)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}, got {self.verdict!r}")

    @property
    def ok(self) -> bool:
        return self.verdict in ("true", "holds")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> VerdictReport:
        return cls(**json.loads(text))

    def to_csv(self, header: bool = False) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(CSV_COLUMNS)
        row = self.to_dict()
        w.writerow(
            json.dumps(row[c], sort_keys=True, separators=(",", ":")) if isinstance(row[c], (dict, list)) else row[c]
            for c in CSV_COLUMNS
        )
        return buf.getvalue().rstrip("\n")

    def to_text(self) -> str:
        inst = " ".join(f"{k}={_short(v)}" for k, v in sorted(self.instance.items()))
        return f"[{self.verdict.upper():5}] {self.command} {inst}"

    def render(self, fmt: str, header: bool = False) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv(header=header)
        if fmt == "text":
            return self.to_text()
        raise ValueError(f"unknown format {fmt!r}")


CSV_COLUMNS = ("command", "instance", "verdict", "certificate", "elapsed_ms", "seed", "engine_version")


def _short(v: Any) -> str:
    s = json.dumps(v, sort_keys=True, separators=(",", ":")) if not isinstance(v, str) else v
    return s if len(s) <= 60 else s[:57] + "..."


def verdict_of(flag: bool, kind: str = "bool") -> str:
    if kind == "bool":
        return "true" if flag else "false"
    return "holds" if flag else "fails"
