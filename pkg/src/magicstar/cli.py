"""magicstar command line: build, verify, star."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .algebra import algebra
from .lattice import LatticeError, enumerate_roots, make_spec, write_roots_json
from .magic_star import GradingError, parse_charge, write_star_csv
from .report import Sampler
from .suites import SUITE_IDS, UnknownSuiteError, parse_suite_ids, run_suites


def _root_system(args):
    return enumerate_roots(make_spec(args.family, args.n))


def cmd_build(args) -> int:
    rs = _root_system(args)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{rs.spec.family.value.lower()}_n{rs.spec.n}"
    roots = out / f"{stem}_roots.json"
    write_roots_json(rs, roots)
    print(f"{roots}: {len(rs)} roots", file=sys.stderr)
    if not args.roots_only:
        sc = out / f"{stem}_structure.csv"
        rows = algebra(rs).write_structure_csv(sc)
        print(f"{sc}: {rows} structure-constant terms", file=sys.stderr)
    return 0


def report_document(args, reports) -> dict:
    return {
        "family": args.family,
        "n": args.n,
        "vertex": list(parse_charge(args.vertex)),
        "seed": args.seed,
        "budget": args.sample,
        "passed": all(r.passed for r in reports),
        "suites": [r.to_dict(timing=args.timing) for r in reports],
    }


def report_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "algebra", "check", "mode", "checked", "failed", "expect_failures", "passed"])
    for r in reports:
        for c in r.checks:
            w.writerow([r.id, r.algebra, c.name, c.mode, c.checked, c.failed, int(c.expect_failures), int(c.passed)])
    return buf.getvalue()


def cmd_verify(args) -> int:
    ids = parse_suite_ids(args.suite)
    rs = _root_system(args)
    reports = run_suites(rs, ids, Sampler(args.seed, args.sample), parse_charge(args.vertex))
    for r in reports:
        for line in r.summary_lines():
            print(line, file=sys.stderr)
    if args.format == "csv":
        text = report_csv(reports)
    else:
        text = json.dumps(report_document(args, reports), indent=1, sort_keys=False) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    ok = all(r.passed for r in reports)
    print("ALL PASSED" if ok else "FAILURES PRESENT", file=sys.stderr)
    return 0 if ok else 1


def cmd_star(args) -> int:
    rs = _root_system(args)
    write_star_csv(rs, args.out or sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="magicstar", description="Build and verify Magic Star algebras e6^(n), e8^(n).")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--family", default="e8", choices=["e6", "e7", "e8"])
        sp.add_argument("--n", type=int, default=1)
        sp.add_argument("--out", default=None, help="output path (build: directory)")

    b = sub.add_parser("build", help="write the roots JSON and structure-constants CSV")
    common(b)
    b.add_argument("--roots-only", action="store_true", help="skip the structure-constants CSV")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run named verification suites")
    common(v)
    v.add_argument("--suite", default="COUNTS", help=f"comma-separated IDs from {','.join(SUITE_IDS)}")
    v.add_argument("--vertex", default="1,1", help="star tip R,S carrying the HT-algebra / HT-pair")
    v.add_argument("--sample", type=int, default=1_000_000, help="sample budget for sampled checks")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--format", choices=["json", "csv"], default="json")
    v.add_argument("--timing", action="store_true", help="include elapsed_ms (breaks byte-identical reports)")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("star", help="write the (root index, r, s) projection CSV")
    common(s)
    s.set_defaults(func=cmd_star)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if not 0 <= getattr(args, "seed", 0) < 2**64:
            raise ValueError("--seed must be a 64-bit unsigned integer")
        return args.func(args)
    except (LatticeError, GradingError, UnknownSuiteError, ValueError) as e:
        print(f"magicstar: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
