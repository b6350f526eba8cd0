"""Verification reports and deterministic sampling."""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

MAX_WITNESSES = 100


@dataclass
class CheckResult:
    """Outcome of one identity checked over many instances.

    ``expect_failures`` marks measurements whose pass criterion is inverted
    (e.g. Jacobi violations at n >= 2): the check passes iff ``failed > 0``.
    """

    name: str
    mode: str = "exhaustive"
    checked: int = 0
    failed: int = 0
    witnesses: list = field(default_factory=list)
    expect_failures: bool = False

    @property
    def passed(self) -> bool:
        return self.failed > 0 if self.expect_failures else self.failed == 0

    def add(self, ok, witness: Optional[Callable[[np.ndarray], list]] = None) -> None:
        """Record a boolean array of outcomes; ``witness`` maps failing positions to entries."""
        ok = np.asarray(ok, dtype=bool).ravel()
        self.checked += ok.size
        bad = np.flatnonzero(~ok)
        self.failed += bad.size
        room = MAX_WITNESSES - len(self.witnesses)
        if bad.size and room > 0:
            sel = bad[:room]
            self.witnesses.extend(witness(sel) if witness else [int(i) for i in sel])

    def add_one(self, ok: bool, witness: Any = None) -> None:
        self.checked += 1
        if not ok:
            self.failed += 1
            if len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(witness)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "mode": self.mode,
            "checked": self.checked,
            "failed": self.failed,
            "expect_failures": self.expect_failures,
            "passed": self.passed,
            "witnesses": self.witnesses,
        }


@dataclass
class VerificationReport:
    id: str
    algebra: str = ""
    seed: Optional[int] = None
    checks: list[CheckResult] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    def check(self, name: str, mode: str = "exhaustive", expect_failures: bool = False) -> CheckResult:
        c = CheckResult(name, mode, expect_failures=expect_failures)
        self.checks.append(c)
        return c

    @property
    def mode(self) -> str:
        return "sampled" if any(c.mode != "exhaustive" for c in self.checks) else "exhaustive"

    @property
    def checked(self) -> int:
        return sum(c.checked for c in self.checks)

    @property
    def failed(self) -> int:
        return sum(c.failed for c in self.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def witnesses(self) -> list:
        out = []
        for c in self.checks:
            out.extend({"check": c.name, "witness": w} for w in c.witnesses)
        return out[:MAX_WITNESSES]

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "id": self.id,
            "algebra": self.algebra,
            "mode": self.mode,
            "seed": self.seed,
            "checked": self.checked,
            "failed": self.failed,
            "passed": self.passed,
            "witnesses": self.witnesses,
            "checks": [c.to_dict() for c in self.checks],
            "details": self.details,
        }
        if timing:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            inv = " (violations expected)" if c.expect_failures else ""
            lines.append(f"[{status}] {self.id} {c.name}: {c.mode}, checked={c.checked}, failed={c.failed}{inv}")
        return lines


class Timer:
    def __init__(self, report: VerificationReport):
        self.report = report

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.elapsed_ms = (time.perf_counter() - self.t0) * 1000.0
        return False


class Sampler:
    """Seeded randomness split deterministically per label.

    ``budget`` caps the number of sampled instances per sampled check.
    """

    def __init__(self, seed: int = 0, budget: int = 1_000_000):
        self.seed = int(seed)
        self.budget = int(budget)

    def rng(self, label: str) -> np.random.Generator:
        key = zlib.crc32(label.encode("utf-8"))
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(key,)))

    def __repr__(self) -> str:
        return f"Sampler(seed={self.seed}, budget={self.budget})"


def allocate(budget: int, sizes: list[int]) -> list[int]:
    """Split ``budget`` as evenly as possible across strata of the given sizes.

    A stratum never receives more than its size; leftover budget is passed on
    to the larger strata.
    """
    alloc = [0] * len(sizes)
    open_ = [i for i, s in enumerate(sizes) if s > 0]
    remaining = budget
    while open_ and remaining > 0:
        share = max(remaining // len(open_), 1)
        nxt = []
        for i in open_:
            take = min(share, sizes[i] - alloc[i], remaining)
            alloc[i] += take
            remaining -= take
            if alloc[i] < sizes[i]:
                nxt.append(i)
            if remaining == 0:
                break
        open_ = nxt
    return alloc
