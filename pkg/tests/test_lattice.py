import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magicstar.lattice import (
    Family,
    InvalidLevelError,
    Kind,
    NotInLatticeError,
    UnsupportedFamilyError,
    decompose,
    enumerate_roots,
    expected_root_count,
    inner,
    make_spec,
    root_index,
    roots_document,
    simple_roots,
    write_roots_json,
)


def vec2(N, entries):
    v = [0] * N
    for i, c in entries.items():
        v[i - 1] = int(2 * Fraction(c))
    return tuple(v)


@pytest.mark.parametrize("fam,n,N,R", [("e8", 1, 8, 8), ("e6", 1, 8, 6), ("e8", 2, 12, 12), ("e6", 3, 16, 14)])
def test_spec_dimensions(fam, n, N, R):
    s = make_spec(fam, n)
    assert (s.N, s.R) == (N, R)


@pytest.mark.parametrize("n", [0, -1, 1.5, True])
def test_invalid_level(n):
    with pytest.raises(InvalidLevelError):
        make_spec("e8", n)


def test_unknown_family():
    with pytest.raises(UnsupportedFamilyError):
        make_spec("g2", 1)
    assert Family.parse("E6") is Family.E6


def test_e7_has_no_table():
    with pytest.raises(UnsupportedFamilyError, match="three_grading"):
        enumerate_roots(make_spec("e7", 1))


@pytest.mark.parametrize("fam,n,count", [("e8", 1, 240), ("e6", 1, 72), ("e8", 2, 2312), ("e6", 2, 656)])
def test_root_counts(fam, n, count):
    rs = enumerate_roots(make_spec(fam, n))
    assert len(rs) == count == expected_root_count(fam, n)


def test_roots_closed_and_distinct(e8_1, e6_1):
    for rs in (e8_1, e6_1):
        assert len(set(r.coords2 for r in rs.roots)) == len(rs)
        assert (rs.neg[rs.neg] == np.arange(len(rs))).all()
        assert (rs.coords2[rs.neg] == -rs.coords2).all()


def test_norms(e8_1, e8_2):
    for rs in (e8_1, e8_2):
        n = rs.spec.n
        idx = np.arange(len(rs))
        norms = rs.inner_many(idx, idx)
        assert set(norms[~rs.is_spinor].tolist()) == {2}
        assert set(norms[rs.is_spinor].tolist()) == {n + 1}


def test_e6_spinor_u_block(e6_1):
    N = e6_1.spec.N
    s = e6_1.coords2[e6_1.is_spinor]
    assert (s[:, N - 3] == s[:, N - 2]).all() and (s[:, N - 2] == s[:, N - 1]).all()
    o = e6_1.coords2[~e6_1.is_spinor]
    assert (o[:, N - 3:] == 0).all()


def test_simple_roots_e8_1(e8_1):
    sr = simple_roots(e8_1)
    assert sr[7].coords2 == (-1,) * 8
    assert sr[6].coords2 == vec2(8, {6: 1, 7: 1})
    assert sr[0].coords2 == vec2(8, {1: 1, 2: -1})


def test_simple_roots_e6_1(e6_1):
    assert simple_roots(e6_1)[4].coords2 == vec2(8, {4: 1, 5: 1})


def test_inner_examples():
    assert inner(vec2(8, {1: 1, 2: 1}), vec2(8, {1: 1, 2: -1})) == 0
    assert inner(vec2(8, {1: 1, 2: 1}), vec2(8, {1: 1, 2: 1})) == 2


def test_decompose_examples(e8_1):
    N = 8
    for i in range(1, N):
        for j in range(i + 1, N):
            m = decompose(vec2(N, {i: 1, j: -1}), e8_1)
            assert list(m) == [1 if i <= l <= j - 1 else 0 for l in range(1, N + 1)]
    assert list(decompose(e8_1.simple[0], e8_1)) == [1] + [0] * 7
    with pytest.raises(NotInLatticeError):
        decompose(vec2(N, {1: 1}), e8_1)


def test_root_index_examples(e8_1):
    assert root_index(vec2(8, {1: 1, 2: -1}), e8_1) is not None
    assert root_index((0,) * 8, e8_1) is None
    assert root_index(vec2(8, {1: 2, 2: -2}), e8_1) is None


def test_all_roots_integral_in_simple_basis(e8_2):
    L = e8_2.L
    assert (e8_2.A @ L.T == e8_2.coords2.T).all()


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=8, max_size=8))
def test_decompose_recompose_roundtrip(m):
    rs = enumerate_roots(make_spec("e8", 1))
    v = rs.recompose(m)
    assert list(decompose(v, rs)) == m


def test_roots_json(tmp_path, e8_1):
    doc = roots_document(e8_1)
    assert (doc["family"], doc["n"], doc["N"], doc["R"]) == ("e8", 1, 8, 8)
    assert doc["roots"][0].keys() == {"index", "kind", "coords2"}
    p = tmp_path / "r.json"
    assert write_roots_json(e8_1, p) == 240
    back = json.loads(p.read_text())
    assert back == doc
    kinds = {r["kind"] for r in back["roots"]}
    assert kinds == {Kind.ORTHOGONAL.value, Kind.SPINOR.value}
