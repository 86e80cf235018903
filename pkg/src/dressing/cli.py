"""Command line front end: ``dressing verify <suite>`` and ``dressing explain <id>``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness
from .fixtures import FixtureError, load_fixture

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _tol(text: str) -> tuple[str, float]:
    key, sep, val = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key, float(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance for {key} is not a number: {val!r}") from None


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dressing", description="Verify dressing-field identities on seeded random or fixture configurations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="run a property suite and print a JSON report")
    v.add_argument("suite", choices=harness.SUITES)
    v.add_argument("--seed", type=_seed, default=0)
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--points", type=int, default=20)
    v.add_argument("--tol", type=_tol, action="append", default=[], metavar="ID=VALUE")
    v.add_argument("--fixture", type=Path, help="JSON fixture replacing the random configurations of its family")
    v.add_argument("--report", type=Path, help="write the report here instead of stdout")
    v.add_argument("--quiet", action="store_true", help="no per-property summary on stderr")
    e = sub.add_parser("explain", help="describe a property")
    e.add_argument("property_id")
    sub.add_parser("list", help="list property ids")
    return p


def _summary(report: dict) -> str:
    lines = []
    for r in report["body"]["properties"]:
        status = "PASS" if r["pass"] else "FAIL"
        if "error" in r:
            detail = f"error {r['error']['type']}: {r['error']['message']}"
        else:
            detail = f"residual {r['max_residual']} (tol {r['tolerance']})"
        lines.append(f"{status} {r['id']}: {detail}")
    lines.append(f"overall: {'PASS' if report['body']['pass'] else 'FAIL'} in {report['meta']['wall_time_s']} s")
    return "\n".join(lines)


def _verify(args) -> int:
    overrides = {}
    if args.fixture is not None:
        try:
            family, fixture = load_fixture(args.fixture)
        except FixtureError as err:
            print(f"dressing: fixture error: {err}", file=sys.stderr)
            return EXIT_USAGE
        overrides[family] = fixture
    cfg = harness.SuiteConfig(
        suite=args.suite,
        seed=args.seed,
        trials=args.trials,
        points=args.points,
        tolerances=dict(args.tol),
        fixture=str(args.fixture) if args.fixture else None,
    )
    try:
        report = harness.run_suite(cfg, overrides)
    except harness.UsageError as err:
        print(f"dressing: {err}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.report is not None:
        args.report.write_text(text + "\n")
    else:
        print(text)
    if not args.quiet:
        print(_summary(report), file=sys.stderr)
    return EXIT_PASS if report["body"]["pass"] else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return _verify(args)
    if args.command == "explain":
        try:
            print(harness.explain(args.property_id), end="")
        except harness.UsageError as err:
            print(f"dressing: {err}", file=sys.stderr)
            return EXIT_USAGE
        return EXIT_PASS
    for pid in harness.REGISTRY:
        print(pid)
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
