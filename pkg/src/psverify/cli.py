"""Command-line driver: ``psverify decide <fixture>`` and ``psverify verify <suite> ...``.

Exit status: 0 when every check passes, 1 when some check fails, 2 on configuration or parse errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import sympy

from .coeff import OrderOverflow
from .density import ConfigError
from .explicit import DegenerateCharacter
from .fixtures import FixtureError, load_fixture
from .padic import PrecisionError
from .prinseries import LevelOverflow
from .suites import DEFAULT_BUDGET, SUITES, CharFixture, SuiteConfig, dump_report, run_decide, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="psverify", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    decide = sub.add_parser("decide", help="irreducibility verdicts for every tuple of a fixture")
    decide.add_argument("fixture", type=Path)
    decide.add_argument("--out", type=Path, help="write the JSON report here instead of stdout")

    verify = sub.add_parser("verify", help="run a verification suite at finite level")
    verify.add_argument("suite", choices=SUITES)
    verify.add_argument("--p", type=int, required=True, help="residue characteristic")
    verify.add_argument("--f", type=_positive, default=1, help="residue degree")
    verify.add_argument("--level", type=_positive, default=1, help="precision level M")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximal admissible q^(9M)")
    verify.add_argument("--n-max", type=_positive, default=1000, help="cap on cyclotomic orders")
    verify.add_argument("--jobs", type=_positive, default=1, help="worker processes for per-fixture checks")
    verify.add_argument("--fixture", type=Path, help="character triples to use instead of the defaults")
    verify.add_argument("--out", type=Path, help="write the JSON report here instead of stdout")
    return parser


def _fixture_triples(path: Path, p: int, f: int) -> list:
    fx = load_fixture(path)
    if (fx.p, fx.f) != (p, f):
        raise FixtureError(f"{path}: fixture field (p={fx.p}, f={fx.f}) differs from --p {p} --f {f}")
    out = []
    for i, t in enumerate(fx.tuples):
        if len(t.characters) != 3:
            raise FixtureError(f"{path}: tuples[{i}].characters: suites need exactly three characters")
        if any(not c.algebraic.is_zero() for c in t.characters):
            raise FixtureError(f"{path}: tuples[{i}].characters: suites need smooth characters "
                               "(algebraic_exponents all zero)")
        out.append(CharFixture(t.name, tuple(c.smooth for c in t.characters)))
    return out


def _emit(report: dict, out: Path | None):
    text = dump_report(report)
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)
        s = report["summary"]
        print(f"{report['suite']}: {s['passed']}/{s['checks']} checks passed -> {out}")
    return EXIT_PASS if report["summary"]["failed"] == 0 else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "decide":
            report = run_decide(load_fixture(args.fixture))
        else:
            if not sympy.isprime(args.p):
                raise ConfigError(f"--p {args.p} is not prime")
            cfg = SuiteConfig(p=args.p, f=args.f, level=args.level, seed=args.seed, budget=args.budget,
                              n_max=args.n_max, jobs=args.jobs)
            if args.fixture is not None:
                cfg.fixtures = _fixture_triples(args.fixture, args.p, args.f)
            report = run_suite(args.suite, cfg)
        return _emit(report, args.out)
    except (FixtureError, ConfigError, DegenerateCharacter) as exc:
        print(f"psverify: error: {exc}", file=sys.stderr)
    except (LevelOverflow, PrecisionError, OrderOverflow) as exc:
        print(f"psverify: precision overflow: {exc}", file=sys.stderr)
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
