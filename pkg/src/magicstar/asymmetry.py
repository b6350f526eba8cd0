"""The asymmetry function eps: L x L -> {-1, 1} and its property suites.

For alpha = sum l_i alpha_i and beta = sum m_j alpha_j,

    eps(alpha, beta) = (-1) ** sum_{(i,j) : eps(alpha_i, alpha_j) = -1} l_i m_j

so eps only depends on the coordinates mod 2.  Each root carries two bit masks
(one for each argument slot) and eps collapses to a popcount parity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .lattice import RootSystem
from .report import Sampler, Timer, VerificationReport


@dataclass(frozen=True)
class SimpleSignMatrix:
    eps: np.ndarray  # R x R of +-1

    @property
    def odd(self) -> np.ndarray:
        """0/1 matrix marking the -1 entries."""
        return (self.eps < 0).astype(np.int64)

    def __getitem__(self, ij) -> int:
        return int(self.eps[ij])


def simple_sign_matrix(rs: RootSystem) -> SimpleSignMatrix:
    R = rs.spec.R
    eps = np.ones((R, R), dtype=np.int64)
    for i in range(R):
        eps[i, i] = -1
        for j in range(i + 1, R):
            s = tuple(a + b for a, b in zip(rs.simple[i].coords2, rs.simple[j].coords2))
            if rs.index(s) is not None:
                eps[i, j] = -1
    return SimpleSignMatrix(eps)


def epsilon(a: Sequence[int], b: Sequence[int], m: SimpleSignMatrix) -> int:
    """eps(a, b) from integer simple-root coordinates, as a parity sum."""
    a = np.asarray(list(a), dtype=np.int64)
    b = np.asarray(list(b), dtype=np.int64)
    return 1 - 2 * int((a @ m.odd @ b) & 1)


def epsilon_product(a: Sequence[int], b: Sequence[int], m: SimpleSignMatrix) -> int:
    """Literal product prod eps(alpha_i, alpha_j)^(l_i m_j); slow reference."""
    out = 1
    R = len(a)
    for i in range(R):
        for j in range(R):
            e = int(a[i]) * int(b[j])
            if m.eps[i, j] < 0 and e % 2:
                out = -out
    return out


def _parity(x: np.ndarray, y: np.ndarray, odd: np.ndarray) -> np.ndarray:
    return ((x @ odd) * y).sum(axis=-1) & 1


class Asymmetry:
    """eps bound to a root system, vectorized over root indices."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.matrix = simple_sign_matrix(rs)
        odd = self.matrix.odd
        self.odd = odd
        weights = np.left_shift(np.uint64(1), np.arange(rs.spec.R, dtype=np.uint64))
        self._left = (((rs.L @ odd) & 1).astype(np.uint64) * weights).sum(axis=1).astype(np.uint64)
        self._right = ((rs.L & 1).astype(np.uint64) * weights).sum(axis=1).astype(np.uint64)
        self._left_py = [int(x) for x in self._left]
        self._right_py = [int(x) for x in self._right]

    def __call__(self, a, b) -> np.ndarray:
        """eps(alpha_a, alpha_b) for root index arrays, as int64 +-1."""
        bits = np.bitwise_count(self._left[a] & self._right[b]) & 1
        return 1 - 2 * bits.astype(np.int64)

    @lru_cache(maxsize=None)
    def pair(self, a: int, b: int) -> int:
        return -1 if (self._left_py[a] & self._right_py[b]).bit_count() & 1 else 1

    def coords(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """eps for arbitrary lattice coordinate arrays."""
        return 1 - 2 * _parity(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64), self.odd)


_ASYM: dict = {}


def asymmetry(rs: RootSystem) -> Asymmetry:
    a = _ASYM.get(rs.spec)
    if a is None or a.rs is not rs:
        a = _ASYM[rs.spec] = Asymmetry(rs)
    return a


# -- property suites ----------------------------------------------------

EXHAUSTIVE_MAX_N = 2


def _sign(exponent2: np.ndarray) -> np.ndarray:
    """(-1)^(e) given 2e; asserts e is an integer."""
    if (exponent2 % 2).any():
        raise ArithmeticError("non-integral exponent in an eps identity")
    return 1 - 2 * ((exponent2 // 2) & 1)


def pair_batches(rs: RootSystem, sampler: Sampler, label: str, chunk: int = 200_000):
    """Yield (A, B) index arrays covering all root pairs (n <= 2) or a seeded sample."""
    m = len(rs)
    if rs.spec.n <= EXHAUSTIVE_MAX_N:
        idx = np.arange(m)
        step = max(1, chunk // m)
        for a0 in range(0, m, step):
            rows = np.arange(a0, min(a0 + step, m))
            yield np.repeat(rows, m), np.tile(idx, rows.size)
    else:
        rng = sampler.rng(label)
        left = sampler.budget
        while left > 0:
            k = min(chunk, left)
            yield rng.integers(0, m, k), rng.integers(0, m, k)
            left -= k


def verify_eps_properties(rs: RootSystem, sampler: Sampler | None = None, which: str = "both") -> list[VerificationReport]:
    """Run the eps suites "P2.1" (lattice properties) and/or "P2.2" (root properties)."""
    sampler = sampler or Sampler()
    out = []
    if which in ("both", "P2.1"):
        out.append(_suite_p21(rs, sampler))
    if which in ("both", "P2.2"):
        out.append(_suite_p22(rs, sampler))
    return out


def _suite_p21(rs: RootSystem, sampler: Sampler) -> VerificationReport:
    eps = asymmetry(rs)
    n, R = rs.spec.n, rs.spec.R
    L = rs.L
    gram = rs.gram()
    rep = VerificationReport("P2.1", rs.spec.name, sampler.seed)
    mode = "exhaustive" if n <= EXHAUSTIVE_MAX_N else "sampled"
    with Timer(rep):
        c1 = rep.check("i: eps(a+b,c) = eps(a,c)eps(b,c) [root pairs, seeded c]", mode)
        c2 = rep.check("ii: eps(a,b+c) = eps(a,b)eps(a,c) [root pairs, seeded c]", mode)
        c3 = rep.check("iii: eps(x,x) = (-1)^((x,x)/2 - m_R^2(n-1)/2) [x = a, a+b]", mode)
        c4 = rep.check("iv: eps(a,b)eps(b,a) = (-1)^((a,b) - m_R n_R (n-1)) [root pairs]", mode)
        c5 = rep.check("v: eps(0,b) = eps(a,0) = 1 [roots]", "exhaustive")
        c6 = rep.check("vi: eps(-a,b) = eps(a,b) [root pairs]", mode)
        c7 = rep.check("vii: eps(a,-b) = eps(a,b) [root pairs]", mode)
        rng_c = sampler.rng("P2.1/c")
        for A, B in pair_batches(rs, sampler, "P2.1/pairs"):
            C = rng_c.integers(0, len(rs), A.size)
            wit = lambda sel, A=A, B=B, C=C: [[int(A[i]), int(B[i]), int(C[i])] for i in sel]  # noqa: E731
            la, lb, lc = L[A], L[B], L[C]
            e_ab, e_ba = eps(A, B), eps(B, A)
            c1.add(eps.coords(la + lb, lc) == eps(A, C) * eps(B, C), wit)
            c2.add(eps.coords(la, lb + lc) == e_ab * eps(A, C), wit)
            s = la + lb
            ss = np.einsum("ki,ij,kj->k", s, gram, s)
            c3.add(eps.coords(s, s) == _sign(ss - s[:, -1] ** 2 * (n - 1)), wit)
            ip = rs.inner_many(A, B)
            c4.add(e_ab * e_ba == _sign(2 * (ip - la[:, -1] * lb[:, -1] * (n - 1))), wit)
            c6.add(eps.coords(-la, lb) == e_ab, wit)
            c7.add(eps.coords(la, -lb) == e_ab, wit)
        idx = np.arange(len(rs))
        norms = rs.inner_many(idx, idx)
        c3.add(eps(idx, idx) == _sign(norms - L[:, -1] ** 2 * (n - 1)), lambda sel: [[int(i)] for i in sel])
        zero = np.zeros_like(L)
        c5.add((eps.coords(zero, L) == 1) & (eps.coords(L, zero) == 1), lambda sel: [[int(i)] for i in sel])

        # arbitrary lattice vectors with |m_i| <= 3
        lat = rep.check("i-vii on seeded lattice vectors |m_i| <= 3", "sampled")
        rng = sampler.rng("P2.1/lattice")
        k = min(sampler.budget, 100_000)
        X, Y, Z = (rng.integers(-3, 4, size=(k, R)) for _ in range(3))
        e = eps.coords
        xy = np.einsum("ki,ij,kj->k", X, gram, Y)
        xx = np.einsum("ki,ij,kj->k", X, gram, X)
        ok = (e(X + Y, Z) == e(X, Z) * e(Y, Z))
        ok &= e(X, Y + Z) == e(X, Y) * e(X, Z)
        ok &= e(X, X) == _sign(xx - X[:, -1] ** 2 * (n - 1))
        ok &= e(X, Y) * e(Y, X) == _sign(2 * (xy - X[:, -1] * Y[:, -1] * (n - 1)))
        ok &= (e(np.zeros_like(X), Y) == 1) & (e(X, np.zeros_like(Y)) == 1)
        ok &= (e(-X, Y) == e(X, Y)) & (e(X, -Y) == e(X, Y))
        lat.add(ok, lambda sel: [[X[i].tolist(), Y[i].tolist(), Z[i].tolist()] for i in sel])
    return rep


def _masked(A, B, mask):
    A, B = A[mask], B[mask]
    return lambda sel: [[int(A[i]), int(B[i])] for i in sel]


def _suite_p22(rs: RootSystem, sampler: Sampler) -> VerificationReport:
    eps = asymmetry(rs)
    n = rs.spec.n
    L = rs.L
    rep = VerificationReport("P2.2", rs.spec.name, sampler.seed)
    mode = "exhaustive" if n <= EXHAUSTIVE_MAX_N else "sampled"
    with Timer(rep):
        c1 = rep.check("i: eps(a,a) = -1 for every root", "exhaustive")
        c2 = rep.check("ii: eps(a,b) = -eps(b,a) when a, b, a+b are roots", mode)
        c3 = rep.check("iii: eps(a,b) = eps(b,a+b) when a, a+b are roots", mode)
        c4 = rep.check("iv: eps(a,b) = eps(b,a-b) when a, a-b are roots", mode)
        idx = np.arange(len(rs))
        c1.add(eps(idx, idx) == -1, lambda sel: [[int(i)] for i in sel])
        for A, B in pair_batches(rs, sampler, "P2.2/pairs"):
            s = rs.sum_index(A, B)
            m = s >= 0
            c2.add((eps(A, B) == -eps(B, A))[m], _masked(A, B, m))
            # iii: B = alpha + beta, so beta = B - A must be a root
            m3 = rs.sum_index(rs.neg[A], B) >= 0
            beta = L[B] - L[A]
            c3.add((eps.coords(L[A], beta) == eps.coords(beta, L[B]))[m3], _masked(A, B, m3))
            # iv: B = alpha - beta, so beta = A - B must be a root
            m4 = rs.sum_index(A, rs.neg[B]) >= 0
            beta = L[A] - L[B]
            c4.add((eps.coords(L[A], beta) == eps.coords(beta, L[B]))[m4], _masked(A, B, m4))
    return rep
