from fractions import Fraction

import numpy as np
import pytest

from magicstar import exact
from magicstar.algebra import algebra
from magicstar.lattice import enumerate_roots, make_spec
from magicstar.magic_star import (
    CENTER,
    TIPS,
    Charge,
    GradingError,
    charge,
    expected_cell_counts,
    five_grading,
    g1_keys,
    grading_closure_check,
    parse_charge,
    partition,
    quartic_diagonal,
    quartic_form,
    random_element,
    symplectic_form,
    symplectic_gram,
    three_grading,
    tip_keys,
    tip_size,
    triple_product_pair,
    triple_product_T,
    write_star_csv,
    zeta,
)


def v2(N, entries):
    v = [0] * N
    for i, c in entries.items():
        v[i - 1] = 2 * c
    return tuple(v)


def test_charges():
    assert charge(v2(8, {1: 1, 2: 1})) == (0, 2)
    assert charge(v2(8, {2: -1, 3: -1})) == (1, 1)
    assert charge(v2(8, {2: 1, 3: -1})) == (-1, 3)
    assert parse_charge("1,-1") == Charge(1, -1)
    with pytest.raises(GradingError):
        three_grading(enumerate_roots(make_spec("e8", 1)), (3, 1))


@pytest.mark.parametrize("fam,n,tip,center", [("e8", 1, 27, 72), ("e6", 1, 9, 12), ("e8", 2, 275, 656)])
def test_partition_sizes(fam, n, tip, center):
    rs = enumerate_roots(make_spec(fam, n))
    part = partition(rs)
    assert tip_size(rs) == tip
    counts = part.cell_counts()
    assert counts[CENTER] == center
    assert counts == expected_cell_counts(rs)
    assert sum(counts.values()) == len(rs)


def test_tips_abelian(e8_1):
    alg = algebra(e8_1)
    for t in TIPS:
        keys = sorted(tip_keys(e8_1, t))
        for p in keys:
            for q in keys:
                assert not alg.basis_bracket(p, q)


def test_three_grading_tallies(e8_1, e6_1, e8_2):
    for rs, full, span in ((e8_1, 134, 133), (e6_1, 36, 35), (e8_2, 1218, 1217)):
        g = three_grading(rs, (0, 2))
        assert g.details["dim_with_full_cartan"] == full
        assert g.details["dim_with_root_span_cartan"] == span
        assert g.dim(1) == g.dim(-1) == tip_size(rs)


@pytest.mark.parametrize("axis", TIPS)
def test_three_grading_closure_n1(e8_1, axis):
    assert grading_closure_check(three_grading(e8_1, axis)).passed


def test_five_grading(e8_1, e8_2, e6_1):
    for rs, g1 in ((e8_1, 56), (e8_2, 552), (e6_1, 20)):
        g = five_grading(rs)
        assert g.dim(2) == g.dim(-2) == 1
        assert g.dim(1) == g.dim(-1) == g1
        assert g.total_dim == algebra(rs).dim
    assert grading_closure_check(five_grading(e8_1)).passed


def test_zeta_involution(e8_1):
    alg = algebra(e8_1)
    x = alg.h(2) * 3 + alg.x(5) - alg.x(9) * Fraction(1, 2)
    assert zeta(zeta(x)) == x
    assert zeta(alg.h(1)) == -alg.h(1)


def test_triple_products(e8_1):
    alg = algebra(e8_1)
    t = TIPS[2]
    for a in sorted(tip_keys(e8_1, t)):
        x = alg.basis(a)
        ra = a - alg.R
        norm = int(e8_1.inner_many(np.array([ra]), np.array([ra]))[0])
        assert triple_product_T(x, x, x, t) == x * (-norm)
    plus, minus = sorted(tip_keys(e8_1, t)), sorted(tip_keys(e8_1, -Charge(*t)))
    x, y, z = alg.basis(plus[0]), alg.basis(minus[3]), alg.basis(plus[5])
    assert triple_product_pair(x, y, z, t) == alg.bracket(alg.bracket(x, y), z)
    with pytest.raises(GradingError):
        triple_product_pair(y, y, z, t)


def test_symplectic(e8_1):
    g = five_grading(e8_1)
    alg = algebra(e8_1)
    keys, G = symplectic_gram(g)
    assert (G == -G.T).all()
    assert exact.rank(G.tolist()) == 56
    rng = np.random.default_rng(2)
    x = random_element(alg, g1_keys(g), rng)
    assert symplectic_form(x, x, g) == 0
    R = alg.R
    for i, a in enumerate(keys):
        for j, b in enumerate(keys):
            if e8_1.sum_index(np.array([a - R]), np.array([b - R]))[0] == g.rho:
                assert symplectic_form(alg.basis(a), alg.basis(b), g) == alg.eps.pair(a - R, b - R) == G[i, j]


def test_e6_symplectic_rank(e6_1):
    _, G = symplectic_gram(five_grading(e6_1))
    assert exact.rank(G.tolist()) == 20


def test_quartic(e8_1):
    g = five_grading(e8_1)
    alg = algebra(e8_1)
    rng = np.random.default_rng(4)
    keys = g1_keys(g)
    for _ in range(5):
        x = random_element(alg, keys, rng, terms=5)
        assert quartic_form(x, x, x, x, g) == quartic_diagonal(x, g)
    a, b = (alg.R + int(r) for r in (2, 5))
    assert quartic_form(alg.basis(a), alg.basis(b), alg.basis(a), alg.basis(b), g) == -1
    assert quartic_form(*(alg.basis(a),) * 4, g) == 0


def test_star_csv(tmp_path, e8_1, e6_1):
    p = tmp_path / "star.csv"
    assert write_star_csv(e8_1, p) == 240
    lines = p.read_text().splitlines()
    assert lines[0] == "root_index,r,s" and len(lines) == 241
    cells = {}
    for row in lines[1:]:
        _, r, s = row.split(",")
        cells[(int(r), int(s))] = cells.get((int(r), int(s)), 0) + 1
    assert len(cells) == 13
    assert cells == {tuple(k): v for k, v in expected_cell_counts(e8_1).items()}
    assert write_star_csv(e6_1, tmp_path / "e6.csv") == 72
