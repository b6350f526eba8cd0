import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magicstar.asymmetry import asymmetry, epsilon, epsilon_product, simple_sign_matrix, verify_eps_properties
from magicstar.lattice import enumerate_roots, make_spec
from magicstar.report import Sampler


def test_simple_sign_matrix_shape(e8_1, e6_1):
    for rs in (e8_1, e6_1):
        m = simple_sign_matrix(rs)
        R = rs.spec.R
        assert m.eps.shape == (R, R)
        assert (np.diag(m.eps) == -1).all()


def test_sign_matrix_rule(e8_2):
    m = simple_sign_matrix(e8_2)
    R = e8_2.spec.R
    for i in range(R):
        for j in range(R):
            if i == j:
                continue
            s = tuple(a + b for a, b in zip(e8_2.simple[i].coords2, e8_2.simple[j].coords2))
            root = e8_2.index(s) is not None
            assert m[i, j] == (-1 if (i < j and root) else 1)


def test_e8_1_named_entries(e8_1):
    m = simple_sign_matrix(e8_1)
    # alpha_6 + alpha_7 = 2 k_6 is not a root, so the ordering branch never fires
    assert m[5, 6] == 1
    # alpha_5 + alpha_7 = k_5 + k_7 is a root
    assert m[4, 6] == -1


def test_eps_zero_and_diagonal(e8_1):
    eps = asymmetry(e8_1)
    idx = np.arange(len(e8_1))
    assert (eps(idx, idx) == -1).all()
    z = np.zeros((1, 8), dtype=np.int64)
    assert eps.coords(z, e8_1.L).tolist() == [1] * 240


def test_eps_at_alpha_R(e8_2):
    eps = asymmetry(e8_2)
    a = e8_2.index(e8_2.simple[-1].coords2)
    assert eps.pair(a, a) == -1


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=12, max_size=12), st.lists(st.integers(-3, 3), min_size=12, max_size=12))
def test_parity_matches_literal_product(a, b):
    rs = enumerate_roots(make_spec("e8", 2))
    m = simple_sign_matrix(rs)
    assert epsilon(a, b, m) == epsilon_product(a, b, m)
    assert epsilon(a, b, m) == int(asymmetry(rs).coords(np.array(a), np.array(b)))


def test_vectorized_matches_pair(e8_1):
    eps = asymmetry(e8_1)
    rng = np.random.default_rng(1)
    A, B = rng.integers(0, 240, 500), rng.integers(0, 240, 500)
    assert eps(A, B).tolist() == [eps.pair(int(a), int(b)) for a, b in zip(A, B)]
    m = eps.matrix
    assert [epsilon(e8_1.L[a], e8_1.L[b], m) for a, b in zip(A, B)] == eps(A, B).tolist()


@pytest.mark.parametrize("fam", ["e8", "e6"])
def test_suites_n1(fam):
    rs = enumerate_roots(make_spec(fam, 1))
    reps = verify_eps_properties(rs, Sampler(0, 10_000))
    assert [r.id for r in reps] == ["P2.1", "P2.2"]
    for r in reps:
        assert r.passed, r.summary_lines()
        assert r.failed == 0
    assert reps[0].checks[0].checked == len(rs) ** 2


def test_p22_counts_only_qualifying_pairs(e8_1):
    (rep,) = verify_eps_properties(e8_1, Sampler(0, 1000), "P2.2")
    ii = rep.checks[1]
    A = np.repeat(np.arange(240), 240)
    B = np.tile(np.arange(240), 240)
    assert ii.checked == int((e8_1.sum_index(A, B) >= 0).sum())
