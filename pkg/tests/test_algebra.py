import csv
from fractions import Fraction

import numpy as np
import pytest

from magicstar.algebra import (
    AlgebraMismatchError,
    Element,
    NotARootError,
    algebra,
    bracket,
    cartan_element,
    jacobi_scan,
    jacobi_verification,
    jacobiator,
)
from magicstar.report import Sampler


def x_of(alg, entries):
    v = [0] * alg.rs.spec.N
    for i, c in entries.items():
        v[i - 1] = 2 * c
    return alg.x(tuple(v))


def test_element_arithmetic(e8_1):
    alg = algebra(e8_1)
    a, b = alg.h(1), alg.x(0)
    e = a * Fraction(1, 2) + b * 3
    assert e.coeff(0) == Fraction(1, 2) and e.coeff(alg.R) == 3
    assert e - e == 0
    assert (e / 3).coeff(alg.R) == 1
    assert -e + e == alg.zero()
    assert len(Element(alg, {0: 0, 1: 2})) == 1
    assert sum([a, a, a]) == a * 3


def test_mismatch(e8_1, e6_1):
    with pytest.raises(AlgebraMismatchError):
        algebra(e8_1).h(1) + algebra(e6_1).h(1)
    with pytest.raises(NotARootError):
        algebra(e8_1).x((0,) * 8)
    with pytest.raises(IndexError):
        algebra(e8_1).h(9)


def test_cartan_elements(e8_1):
    alg = algebra(e8_1)
    simple0 = e8_1.index(e8_1.simple[0].coords2)
    assert cartan_element(simple0, alg) == alg.h(1)
    for a in range(0, 240, 17):
        assert alg.cartan_element(int(e8_1.neg[a])) == -alg.cartan_element(a)
    # k_i - k_j -> h_i + ... + h_(j-1)
    v = [0] * 8
    v[1], v[5] = 2, -2
    assert alg.cartan_element(tuple(v)) == sum(alg.h(l) for l in range(2, 6))


def test_bracket_rules(e8_1):
    alg = algebra(e8_1)
    rng = np.random.default_rng(3)
    for a in rng.integers(0, 240, 40):
        a = int(a)
        xa, xm = alg.x(a), alg.x(int(e8_1.neg[a]))
        assert bracket(xa, xm) == -alg.cartan_element(a)
        for i in range(1, 9):
            assert bracket(alg.h(i), xa) == xa * int(alg.hact[a, i - 1])
    p = x_of(alg, {1: 1, 2: 1})
    q = x_of(alg, {1: 1, 2: -1})
    assert bracket(p, q) == 0


def test_antisymmetry_and_sum_rule(e8_1):
    alg = algebra(e8_1)
    for a in range(240):
        for b in range(0, 240, 7):
            xy, yx = bracket(alg.x(a), alg.x(b)), bracket(alg.x(b), alg.x(a))
            assert xy == -yx
            s = e8_1.sum_index(np.array([a]), np.array([b]))[0]
            if s >= 0:
                assert xy == alg.x(int(s)) * alg.eps.pair(a, b)


def test_bilinearity(e8_1):
    alg = algebra(e8_1)
    rng = np.random.default_rng(5)
    for _ in range(30):
        x, y, z = (Element(alg, {int(k): Fraction(int(rng.integers(-3, 4)), 2) for k in rng.integers(0, alg.dim, 4)}) for _ in range(3))
        assert bracket(x + y, z) == bracket(x, z) + bracket(y, z)
        assert bracket(x * 3, z) == bracket(x, z) * 3


def test_jacobi_n1_elements(e8_1):
    alg = algebra(e8_1)
    rng = np.random.default_rng(7)
    for _ in range(200):
        p, q, r = (int(k) for k in rng.integers(0, alg.dim, 3))
        assert jacobiator(alg.basis(p), alg.basis(q), alg.basis(r)) == 0
    assert jacobiator(alg.h(1), alg.h(2), alg.x(4)) == 0


def test_kernels_match_elements(e8_2):
    alg = algebra(e8_2)
    rng = np.random.default_rng(11)
    m = len(e8_2)
    sp = e8_2.spinor_indices
    A = np.concatenate([rng.integers(0, m, 300), rng.choice(sp, 300)])
    B = np.concatenate([rng.integers(0, m, 300), rng.choice(sp, 300)])
    C = np.concatenate([rng.integers(0, m, 300), rng.choice(sp, 300)])
    nz, _ = alg.jacobi_nonzero(A + alg.R, B + alg.R, C + alg.R)
    for i in range(A.size):
        j = jacobiator(alg.x(int(A[i])), alg.x(int(B[i])), alg.x(int(C[i])))
        assert bool(j) == bool(nz[i])
    assert nz.any()


def test_n2_spinor_triple_nonzero(e8_2):
    rep = jacobi_scan(e8_2, sampler=Sampler(0, 50_000))
    assert rep.violations > 0
    a, b, c = rep.witnesses[0]["triple"]
    alg = algebra(e8_2)
    assert jacobiator(alg.basis(a), alg.basis(b), alg.basis(c)) != 0
    assert all(w["spinors"] >= 2 for w in rep.witnesses)


def test_n2_orthogonal_scan_clean(e8_2):
    rep = jacobi_scan(e8_2, mode="sampled", sampler=Sampler(0, 100_000), restrict="orthogonal")
    assert rep.violations == 0 and rep.triples_checked > 0


def test_jacobi_verification_n1(e6_1):
    rep = jacobi_verification(e6_1)
    assert rep.passed and rep.checks[0].mode == "exhaustive" and rep.failed == 0


def test_structure_csv(tmp_path, e6_1):
    alg = algebra(e6_1)
    p = tmp_path / "s.csv"
    rows = alg.write_structure_csv(p)
    with open(p) as fh:
        data = list(csv.reader(fh))
    assert data[0] == ["a_index", "b_index", "term_kind", "term_index", "numerator", "denominator"]
    assert len(data) == rows + 1
    rng = np.random.default_rng(0)
    for row in (data[int(i)] for i in rng.integers(1, len(data), 200)):
        a, b, kind, t, num, den = row
        got = bracket(alg.basis(int(a)), alg.basis(int(b)))
        assert den == "1"
        key = int(t) if kind == "H" else int(t)
        assert kind in ("H", "X") and (kind == "H") == (key < alg.R)
        assert got.coeff(key) == int(num)
    count = sum(len(alg.basis_bracket(p, q)) for p in range(alg.dim) for q in range(alg.dim))
    assert count == rows
