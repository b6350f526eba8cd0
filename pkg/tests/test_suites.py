import pytest

from magicstar.report import CheckResult, Sampler, VerificationReport, allocate
from magicstar.suites import SUITE_IDS, RUNNERS, UnknownSuiteError, parse_suite_ids, run, run_suites, suite_counts


def test_registry_complete():
    assert set(RUNNERS) == set(SUITE_IDS)
    assert len(SUITE_IDS) == 12


def test_parse_ids():
    assert parse_suite_ids("p2.1, JACOBI,P2.1") == ["P2.1", "JACOBI"]
    with pytest.raises(UnknownSuiteError):
        parse_suite_ids("P9.9")


def test_counts_suite(e8_1, e6_1, e8_2):
    for rs in (e8_1, e6_1, e8_2):
        rep = suite_counts(rs)
        assert rep.passed and rep.details["roots"] == len(rs)


def test_expect_failures_semantics():
    c = CheckResult("m", expect_failures=True)
    c.add_one(True)
    assert not c.passed
    c.add_one(False, "w")
    assert c.passed and c.witnesses == ["w"]


def test_witness_cap():
    c = CheckResult("cap")
    c.add([False] * 500)
    assert c.failed == 500 and len(c.witnesses) == 100


def test_allocate():
    assert sum(allocate(1000, [10, 10_000, 10_000])) <= 1000 + 10
    assert allocate(1000, [5, 5])[0] == 5


def test_sampler_streams_independent():
    s = Sampler(7)
    a = s.rng("x").integers(0, 1 << 30, 5).tolist()
    assert a == Sampler(7).rng("x").integers(0, 1 << 30, 5).tolist()
    assert a != s.rng("y").integers(0, 1 << 30, 5).tolist()
    assert a != Sampler(8).rng("x").integers(0, 1 << 30, 5).tolist()


def test_order_independent(e8_1):
    a = {r.id: r.to_dict() for r in run_suites(e8_1, ["D3.2", "COUNTS"], Sampler(3, 500))}
    b = {r.id: r.to_dict() for r in run_suites(e8_1, ["COUNTS", "D3.2"], Sampler(3, 500))}
    assert a == b


def test_report_dict_has_no_timing_by_default():
    rep = VerificationReport("X")
    assert "elapsed_ms" not in rep.to_dict()
    assert "elapsed_ms" in rep.to_dict(timing=True)


def test_run_helper():
    (rep,) = run("e6", 1, "COUNTS")
    assert rep.passed
