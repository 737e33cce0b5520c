"""Check records and their JSON/CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable


@dataclass(frozen=True)
class Check:
    name: str
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    passed: bool

    @classmethod
    def compare(cls, name: str, lhs, rhs, tolerance: float, residual=None) -> "Check":
        """Build a check; ``residual`` defaults to ``|lhs - rhs|``."""
        lhs = float(lhs)
        rhs = float(rhs)
        if residual is None:
            residual = abs(lhs - rhs)
        residual = float(residual)
        passed = bool(math.isfinite(residual) and residual <= tolerance)
        return cls(name, lhs, rhs, residual, float(tolerance), passed)

    @classmethod
    def bound(cls, name: str, residual, tolerance: float) -> "Check":
        """A check whose target is a vanishing residual."""
        return cls.compare(name, residual, 0.0, tolerance, residual=residual)


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks: Iterable[Check]) -> None:
        self.checks.extend(checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "metadata": self.metadata,
            "checks": [asdict(c) for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        data = json.loads(text)
        checks = [Check(**c) for c in data.get("checks", [])]
        return cls(checks=checks, metadata=data.get("metadata", {}))

    def to_csv(self) -> str:
        return rows_to_csv(CHECK_COLUMNS, [asdict(c) for c in self.checks])


CHECK_COLUMNS = ("name", "lhs", "rhs", "residual", "tolerance", "passed")


def rows_to_csv(columns: Iterable[str], rows: Iterable[dict[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()
