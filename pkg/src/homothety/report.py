"""Check records, zero-test helpers that produce them, and report output."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Any, Iterable

from .kernel import Expr, SampleDomain, is_zero
from .oracle import OracleError, sample_max_residual

DEFAULT_SEED = 42
SEED_ENV = "HOMOTHETY_SEED"
NUMERIC_TOL = 1e-9
NUMERIC_SAMPLES = 100

SYMBOLIC_PASS = "symbolic-pass"
NUMERIC_PASS = "numeric-pass"
FAIL = "fail"


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


@dataclass
class Check:
    check_id: str
    status: str
    tier: str
    witness: dict[str, float] | None = None
    max_residual: float | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def as_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"check_id": self.check_id, "status": self.status, "tier": self.tier}
        if self.witness is not None:
            out["witness"] = {k: self.witness[k] for k in sorted(self.witness)}
        if self.max_residual is not None:
            out["max_residual"] = self.max_residual
        return out

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = []
        if self.max_residual is not None:
            extra.append(f"max={self.max_residual:.3e}")
        if self.witness:
            pt = ", ".join(f"{k}={v:.6g}" for k, v in sorted(self.witness.items()))
            extra.append(f"at {pt}")
        if self.note:
            extra.append(self.note)
        tail = f"  ({'; '.join(extra)})" if extra else ""
        return f"[{verdict}] {self.check_id}: {self.status}{tail}"


def zero_check(check_id: str, exprs: Expr | Iterable[Expr], domain: SampleDomain | None = None,
               seed: int = DEFAULT_SEED, samples: int = NUMERIC_SAMPLES,
               tol: float = NUMERIC_TOL) -> Check:
    """Pass when every expression is zero: symbolically, else within ``tol`` on samples."""
    items = [exprs] if isinstance(exprs, Expr) else list(exprs)
    verdicts = [is_zero(e, domain, seed) for e in items]
    bad = next((v for v in verdicts if not v.is_zero), None)
    if bad is not None:
        return Check(check_id, FAIL, "nonzero", bad.witness, _magnitude(bad.value))
    if all(v.tier == "symbolic" for v in verdicts):
        return Check(check_id, SYMBOLIC_PASS, "symbolic")
    try:
        rep = sample_max_residual(items, domain, samples, seed)
    except OracleError as exc:
        return Check(check_id, FAIL, "numeric", note=str(exc))
    if rep.max_abs <= tol:
        return Check(check_id, NUMERIC_PASS, "numeric", max_residual=rep.max_abs)
    return Check(check_id, FAIL, "nonzero", rep.worst_point, rep.max_abs)


def nonzero_check(check_id: str, e: Expr, domain: SampleDomain | None = None,
                  seed: int = DEFAULT_SEED) -> Check:
    """Pass when ``e`` is demonstrably nonzero; the witness is the evidence."""
    v = is_zero(e, domain, seed)
    if v.is_zero:
        return Check(check_id, FAIL, v.tier, note="expected a nonzero expression")
    return Check(check_id, NUMERIC_PASS, "nonzero", v.witness, _magnitude(v.value))


def _magnitude(value: float | None) -> float | None:
    if value is None or math.isnan(value):
        return None
    return abs(value)


@dataclass
class Report:
    title: str
    seed: int
    checks: list[Check] = field(default_factory=list)
    sections: dict[str, Any] = field(default_factory=dict)
    text: list[str] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        if any(c.check_id == check.check_id for c in self.checks):
            raise ValueError(f"duplicate check id {check.check_id}")
        self.checks.append(check)
        return check

    def extend(self, checks: Iterable[Check]) -> None:
        for c in checks:
            self.add(c)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def ordered(self) -> list[Check]:
        return sorted(self.checks, key=lambda c: c.check_id)

    def as_dict(self) -> dict[str, Any]:
        checks = self.ordered()
        return {
            "title": self.title,
            "seed": self.seed,
            "passed": self.passed,
            "summary": {"total": len(checks), "failed": sum(not c.passed for c in checks)},
            "checks": [c.as_dict() for c in checks],
            **{k: self.sections[k] for k in sorted(self.sections)},
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=False) + "\n"

    def to_text(self) -> str:
        lines = [self.title, f"seed: {self.seed}", ""]
        lines.extend(self.text)
        if self.text:
            lines.append("")
        lines.extend(c.line() for c in self.ordered())
        failed = sum(not c.passed for c in self.checks)
        lines.append("")
        lines.append(f"{len(self.checks) - failed}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"
