"""Small exact rational linear algebra helpers (backed by sympy's DomainMatrix)."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _qq(x) -> object:
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def to_domain(rows: Sequence[Sequence]) -> DomainMatrix:
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    return DomainMatrix([[_qq(x) for x in r] for r in rows], (nrows, ncols), QQ)


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank of a rational matrix."""
    if not rows:
        return 0
    return to_domain(rows).rank()


def left_inverse(rows: Sequence[Sequence]) -> tuple[list[list[int]], int]:
    """Integer left inverse of a full-column-rank matrix A.

    Returns ``(P, d)`` with ``P`` an integer matrix such that ``(P / d) @ A`` is
    the identity. ``P / d`` is the Moore-Penrose solution map ``(A^T A)^-1 A^T``.
    """
    a = to_domain(rows)
    at = a.transpose()
    p = (at * a).inv() * at
    entries = [[to_fraction(q) for q in row] for row in p.to_list()]
    d = 1
    for row in entries:
        for q in row:
            d = lcm(d, q.denominator)
    return [[int(q * d) for q in row] for row in entries], d
