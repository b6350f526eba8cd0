"""Registry of named verification suites, addressable by ID."""

from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np

from .algebra import jacobi_verification
from .asymmetry import verify_eps_properties
from .ht_algebra import build_vertex, suite_la1, suite_la3, suite_p41, suite_pa2
from .ht_pair import suite_p51
from .lattice import RootSystem, expected_row_counts, make_spec
from .magic_star import expected_cell_counts, partition, suite_d32, suite_p31, suite_p32
from .report import Sampler, Timer, VerificationReport

SUITE_IDS = ("P2.1", "P2.2", "P3.1", "P3.2", "D3.2", "P4.1", "LA.1", "PA.2", "LA.3", "P5.1", "JACOBI", "COUNTS")


class UnknownSuiteError(KeyError):
    def __str__(self) -> str:
        return f"unknown suite {self.args[0]!r}; expected one of {', '.join(SUITE_IDS)}"


def suite_counts(rs: RootSystem, sampler: Optional[Sampler] = None) -> VerificationReport:
    """Root counts per table row and per (r, s) cell against the closed-form multiplicities."""
    sampler = sampler or Sampler()
    spec = rs.spec
    rep = VerificationReport("COUNTS", spec.name, sampler.seed)
    with Timer(rep):
        want = expected_row_counts(spec.family, spec.N)
        c = rep.check("total root count = sum of row formulas")
        c.add_one(len(rs) == sum(want), [len(rs), sum(want)])
        c = rep.check("each table row has its closed-form multiplicity")
        for row, w in zip(rs.rows, want):
            c.add_one(len(row) == w, [row.label, row.kind.value, len(row), w])
        c.add_one(len(rs.rows) == len(want), ["rows", len(rs.rows), len(want)])
        c = rep.check("each (r, s) cell of the star has its expected cardinality")
        counts = partition(rs).cell_counts()
        for ch, w in expected_cell_counts(rs).items():
            c.add_one(counts.get(ch, 0) == w, [list(ch), counts.get(ch, 0), w])
        c = rep.check("roots are distinct and closed under negation")
        c.add_one(len(set(map(tuple, rs.coords2.tolist()))) == len(rs))
        c.add(rs.neg[rs.neg] == np.arange(len(rs)))
        rep.details.update(roots=len(rs), N=spec.N, R=spec.R, rows=[len(r) for r in rs.rows])
    return rep


def _ht(fn):
    return lambda rs, sampler, vertex: [fn(build_vertex(rs, vertex), sampler)]


RUNNERS: dict[str, Callable[[RootSystem, Sampler, tuple], list[VerificationReport]]] = {
    "P2.1": lambda rs, s, v: verify_eps_properties(rs, s, "P2.1"),
    "P2.2": lambda rs, s, v: verify_eps_properties(rs, s, "P2.2"),
    "P3.1": lambda rs, s, v: [suite_p31(rs, s)],
    "P3.2": lambda rs, s, v: [suite_p32(rs, s)],
    "D3.2": lambda rs, s, v: [suite_d32(rs, s)],
    "P4.1": _ht(suite_p41),
    "LA.1": _ht(suite_la1),
    "PA.2": _ht(suite_pa2),
    "LA.3": _ht(suite_la3),
    "P5.1": lambda rs, s, v: [suite_p51(rs, s, v)],
    "JACOBI": lambda rs, s, v: [jacobi_verification(rs, s)],
    "COUNTS": lambda rs, s, v: [suite_counts(rs, s)],
}


def parse_suite_ids(value) -> list[str]:
    ids = value.split(",") if isinstance(value, str) else list(value)
    out = []
    for raw in ids:
        key = raw.strip().upper()
        if not key:
            continue
        if key not in RUNNERS:
            raise UnknownSuiteError(raw.strip())
        if key not in out:
            out.append(key)
    return out


def run_suites(rs: RootSystem, suite_ids: Sequence[str], sampler: Optional[Sampler] = None, vertex=(1, 1)) -> list[VerificationReport]:
    """Run suites in the given order. Each suite draws from its own labelled stream, so order does not matter."""
    sampler = sampler or Sampler()
    out = []
    for sid in parse_suite_ids(suite_ids):
        out.extend(RUNNERS[sid](rs, sampler, tuple(vertex)))
    return out


def run(family: str, n: int, suite_ids, seed: int = 0, budget: int = 1_000_000, vertex=(1, 1)) -> list[VerificationReport]:
    from .lattice import enumerate_roots

    return run_suites(enumerate_roots(make_spec(family, n)), suite_ids, Sampler(seed, budget), vertex)
