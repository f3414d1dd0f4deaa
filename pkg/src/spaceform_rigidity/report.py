"""Check records and their serialisation (JSON lines, CSV)."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence


def _clean(value):
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "tolist"):
        return _clean(value.tolist())
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if hasattr(value, "value") and hasattr(value, "name"):  # enums
        return value.name
    return value


@dataclass(frozen=True)
class CheckRecord:
    """One verified quantity: both sides, the residual and its tolerance.

    A ``negative`` record is a control that passes when the residual
    exceeds the tolerance.
    """

    name: str
    inputs: dict
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    note: str = ""
    negative: bool = False

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.residual):
            return False
        if self.negative:
            return self.residual > self.tolerance
        return self.residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "inputs": _clean(self.inputs),
            "lhs": _clean(float(self.lhs)),
            "rhs": _clean(float(self.rhs)),
            "residual": _clean(float(self.residual)),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            **({"negative": True} if self.negative else {}),
            **({"note": self.note} if self.note else {}),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass
class VerificationReport:
    records: list = field(default_factory=list)

    def add(self, *records: CheckRecord) -> "VerificationReport":
        self.records.extend(records)
        return self

    def extend(self, records: Iterable[CheckRecord]) -> "VerificationReport":
        self.records.extend(records)
        return self

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list:
        return [r for r in self.records if not r.passed]

    def to_jsonl(self) -> str:
        return "".join(r.to_json() + "\n" for r in self.records)

    def write_jsonl(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_jsonl())

    def table(self) -> str:
        lines = [f"{'check':<28} {'residual':>12} {'tol':>10}  ok"]
        for r in self.records:
            lines.append(f"{r.name:<28} {r.residual:12.3e} {r.tolerance:10.1e}  {'yes' if r.passed else 'NO'}")
        return "\n".join(lines)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text(header, rows))


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    return buf.getvalue()
