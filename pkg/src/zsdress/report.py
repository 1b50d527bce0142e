"""Verification reports: named checks with residual norms and verdicts."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    max_residual: float
    tolerance: float
    worst_point: tuple[float, float] | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(math.isfinite(self.max_residual) and self.max_residual <= self.tolerance)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "max_residual": _jsonable_float(self.max_residual),
            "tolerance": self.tolerance,
            "pass": self.passed,
            "worst_point": None if self.worst_point is None else [float(v) for v in self.worst_point],
        }
        if self.note:
            d["note"] = self.note
        return d


def _jsonable_float(v):
    v = float(v)
    return v if math.isfinite(v) else str(v)


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)
    config_echo: dict | None = None
    generator_seed: int | None = None
    info: dict = field(default_factory=dict)

    def add(self, name, max_residual, tolerance, worst_point=None, note=""):
        chk = Check(name, float(max_residual), float(tolerance), worst_point, note)
        self.checks.append(chk)
        return chk

    def extend(self, other: "VerificationReport", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.max_residual, c.tolerance, c.worst_point, c.note))
        self.info.update(other.info)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        d = {
            "checks": [c.to_dict() for c in self.checks],
            "config_echo": self.config_echo,
            "generator_seed": self.generator_seed,
        }
        if self.info:
            d["info"] = self.info
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def summary_lines(self) -> list[str]:
        out = []
        for c in self.checks:
            flag = "PASS" if c.passed else "FAIL"
            out.append(f"{flag}  {c.name}: {c.max_residual:.3e} (tol {c.tolerance:.1e})")
        return out
