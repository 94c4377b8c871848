"""Verification and probe reports shared by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ._util import jsonable

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class Check:
    name: str
    verdict: str
    witness: Any = None
    detail: str | None = None

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    def to_json(self) -> dict:
        out = {"name": self.name, "verdict": self.verdict}
        if self.detail is not None:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        return out


@dataclass
class VerificationReport:
    """A named list of checks; the overall verdict fails iff any check fails."""

    task: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name, ok, witness=None, detail=None) -> Check:
        check = Check(name, PASS if ok else FAIL, None if ok else witness, detail)
        self.checks.append(check)
        return check

    def skip(self, name, detail=None) -> Check:
        check = Check(name, SKIPPED, None, detail)
        self.checks.append(check)
        return check

    def extend(self, other: VerificationReport, prefix: str = "") -> None:
        for check in other.checks:
            self.checks.append(Check(prefix + check.name, check.verdict, check.witness, check.detail))

    @property
    def passed(self) -> bool:
        return not any(c.failed for c in self.checks)

    @property
    def overall(self) -> str:
        return PASS if self.passed else FAIL

    def __getitem__(self, name: str) -> Check:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.failed]

    def to_json(self, quiet: bool = False) -> dict:
        checks = [c for c in self.checks if not (quiet and c.verdict == PASS)]
        out = {"task": self.task, "overall": self.overall, "checks": [c.to_json() for c in checks]}
        if self.data:
            out["data"] = jsonable(self.data)
        return out


@dataclass
class ProbeReport:
    """Evidence gathered by a randomized probe. Carries no truth claim."""

    name: str
    samples: int = 0
    holds: int = 0
    fails: int = 0
    witnesses: list = field(default_factory=list)
    seed: int | None = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "seed": self.seed,
            "samples": self.samples,
            "holds": self.holds,
            "fails": self.fails,
            "witnesses": jsonable(self.witnesses),
        }
