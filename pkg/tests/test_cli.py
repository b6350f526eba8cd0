import csv
import json
import subprocess
import sys

import pytest

from magicstar.cli import main


def cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "magicstar", *args], capture_output=True, text=True, cwd=cwd)


def test_build_e8_1(tmp_path):
    r = cli("build", "--family", "e8", "--n", "1", "--out", str(tmp_path))
    assert r.returncode == 0, r.stderr
    doc = json.loads((tmp_path / "e8_n1_roots.json").read_text())
    assert len(doc["roots"]) == 240 and doc["N"] == 8
    rows = list(csv.reader(open(tmp_path / "e8_n1_structure.csv")))
    assert rows[0][0] == "a_index" and len(rows) > 1


def test_build_e6_2(tmp_path):
    assert main(["build", "--family", "e6", "--n", "2", "--out", str(tmp_path), "--roots-only"]) == 0
    doc = json.loads((tmp_path / "e6_n2_roots.json").read_text())
    assert len(doc["roots"]) == 6 + (2 * 6 * 5 + 2 ** 7) + 6 * (2 * 12 - 11 + 2 ** 6)


def test_build_e7_explains(tmp_path):
    r = cli("build", "--family", "e7", "--n", "1", "--out", str(tmp_path))
    assert r.returncode == 2
    assert "three_grading" in r.stderr and "Traceback" not in r.stderr


def test_unknown_suite():
    r = cli("verify", "--suite", "NOPE")
    assert r.returncode == 2 and "unknown suite" in r.stderr


def test_bad_vertex():
    r = cli("verify", "--suite", "P4.1", "--vertex", "3,1")
    assert r.returncode == 2 and "tip" in r.stderr


def test_verify_pa2_n1(tmp_path):
    out = tmp_path / "r.json"
    r = cli("verify", "--suite", "PA.2", "--n", "1", "--out", str(out))
    assert r.returncode == 0, r.stderr
    doc = json.loads(out.read_text())
    (s,) = doc["suites"]
    assert s["id"] == "PA.2" and s["failed"] == 0
    assert s["checks"][1]["checked"] == 19683
    assert set(s) >= {"id", "mode", "checked", "failed", "witnesses"}


def test_verify_jacobi_exit_codes(tmp_path):
    r1 = cli("verify", "--suite", "JACOBI", "--n", "1", "--format", "csv")
    assert r1.returncode == 0
    rows = list(csv.DictReader(r1.stdout.splitlines()))
    assert rows[0]["failed"] == "0"
    r2 = cli("verify", "--suite", "JACOBI", "--n", "2", "--sample", "100000")
    assert r2.returncode == 0, r2.stderr
    doc = json.loads(r2.stdout)
    assert doc["suites"][0]["checks"][0]["failed"] > 0


def test_failing_suite_exit_code(monkeypatch, capsys):
    from magicstar import suites
    from magicstar.report import VerificationReport

    def bad(rs, s, v):
        rep = VerificationReport("COUNTS")
        rep.check("always fails").add_one(False)
        return [rep]

    monkeypatch.setitem(suites.RUNNERS, "COUNTS", bad)
    assert main(["verify", "--suite", "COUNTS"]) == 1
    assert "FAILURES PRESENT" in capsys.readouterr().err


def test_reports_byte_identical(tmp_path):
    args = ["verify", "--suite", "P2.1,D3.2,P5.1", "--family", "e6", "--n", "1", "--seed", "42", "--sample", "3000"]
    a = cli(*args, "--out", str(tmp_path / "a.json"))
    b = cli(*args, "--out", str(tmp_path / "b.json"))
    assert a.returncode == b.returncode == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    c = cli(*args[:-4], "--seed", "43", "--sample", "3000", "--out", str(tmp_path / "c.json"))
    assert json.loads((tmp_path / "c.json").read_text())["seed"] == 43


def test_timing_flag(tmp_path):
    r = cli("verify", "--suite", "COUNTS", "--timing")
    assert "elapsed_ms" in json.loads(r.stdout)["suites"][0]


def test_star(tmp_path):
    r = cli("star", "--family", "e8", "--n", "1")
    lines = r.stdout.splitlines()
    assert lines[0] == "root_index,r,s" and len(lines) == 241
    assert len({tuple(l.split(",")[1:]) for l in lines[1:]}) == 13
    out = tmp_path / "e6.csv"
    assert cli("star", "--family", "e6", "--n", "1", "--out", str(out)).returncode == 0
    assert len(out.read_text().splitlines()) == 73


@pytest.mark.parametrize("seed", ["-1", str(2 ** 64)])
def test_seed_range(seed):
    assert cli("verify", "--suite", "COUNTS", "--seed", seed).returncode == 2
