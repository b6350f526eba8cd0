from fractions import Fraction

import numpy as np
import pytest

from magicstar.algebra import algebra
from magicstar.ht_pair import (
    CompletionError,
    SideError,
    collapse_scan,
    complete_idempotent,
    ht_pair,
    suite_p51,
    u_op,
    v_op,
)
from magicstar.magic_star import Charge, GradingError
from magicstar.report import Sampler


def test_pair_structure(e8_1, e8_2):
    for rs, d in ((e8_1, 27), (e8_2, 275)):
        p = ht_pair(rs)
        assert p.plus.size == p.minus.size == d
        assert sorted(rs.neg[p.plus].tolist()) == sorted(p.minus.tolist())
    with pytest.raises(GradingError):
        ht_pair(e8_1, (0, 0))


def test_u_examples(e8_1):
    p = ht_pair(e8_1)
    alg = p.alg
    for a in p.plus:
        x = alg.x(int(a))
        y = alg.x(int(e8_1.neg[a])) * -1
        assert u_op(x, y, p) == x
        assert u_op(x, alg.zero(), p) == 0


def test_side_errors(e8_1):
    p = ht_pair(e8_1)
    alg = p.alg
    x, x2 = alg.x(int(p.plus[0])), alg.x(int(p.plus[1]))
    y = alg.x(int(p.minus[0]))
    with pytest.raises(SideError):
        u_op(x, x2, p)
    with pytest.raises(SideError):
        v_op(x, x2, x, p)
    with pytest.raises(SideError):
        u_op(alg.h(1), y, p)
    with pytest.raises(SideError):
        u_op(x + y, y, p)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_completion_scales(n, e8_1, e8_2):
    from magicstar.lattice import enumerate_roots, make_spec

    rs = enumerate_roots(make_spec("e8", n))
    p = ht_pair(rs)
    alg = p.alg
    o = next(int(a) for a in p.plus if not rs.is_spinor[a])
    s = next(int(a) for a in p.plus if rs.is_spinor[a])
    _, y = complete_idempotent(alg.x(o), p)
    assert y == -alg.x(int(rs.neg[o]))
    _, y = complete_idempotent(alg.x(s), p)
    assert y == alg.x(int(rs.neg[s])) * Fraction(-2, n + 1)
    with pytest.raises(CompletionError):
        complete_idempotent(alg.x(s) * 2, p)


def test_completion_every_root_n2(e8_2):
    p = ht_pair(e8_2)
    for roots in (p.plus, p.minus):
        for a in roots:
            x, y = complete_idempotent(p.alg.x(int(a)), p)
            assert u_op(x, y, p) == x and u_op(y, x, p) == y


def test_v_linearizes_u(e8_2):
    p = ht_pair(e8_2)
    alg = p.alg
    rng = np.random.default_rng(0)
    R = alg.R
    for _ in range(200):
        x = sum(alg.x(int(a)) * Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 4))) for a in rng.choice(p.plus, 3, replace=False))
        z = sum(alg.x(int(a)) for a in rng.choice(p.plus, 2, replace=False))
        y = sum(alg.x(int(a)) * int(rng.integers(-3, 4) or 1) for a in rng.choice(p.minus, 3, replace=False))
        assert v_op(x, y, x, p) == u_op(x, y, p) * 2
        assert v_op(x, y, z, p) == v_op(z, y, x, p)
        assert u_op(x + z, y, p) == u_op(x, y, p) + u_op(z, y, p) + v_op(x, y, z, p)
    assert R > 0


def test_collapse(e8_1, e8_2):
    s1 = collapse_scan(ht_pair(e8_1))
    assert s1["triples"] == 27 ** 3 and s1["violations"] == 0
    s2 = collapse_scan(ht_pair(e8_2), Sampler(0, 200_000))
    assert s2["violations"] > 0
    p = ht_pair(e8_2)
    alg = p.alg
    for a, b, c in s2["witnesses"][:20]:
        x, y, z = alg.x(a), alg.x(b), alg.x(c)
        assert v_op(x, y, z, p) != alg.bracket(alg.bracket(x, y), z)


def test_suite_n1(e8_1, e6_1):
    for rs in (e8_1, e6_1):
        rep = suite_p51(rs, Sampler(0, 2000))
        assert rep.passed, rep.summary_lines()
        assert rep.details["collapse_violations"] == 0


def test_other_tip(e8_1):
    rep = suite_p51(e8_1, Sampler(0, 500), Charge(-1, 1))
    assert rep.passed
