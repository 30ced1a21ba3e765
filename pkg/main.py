#!/usr/bin/env python3
"""
pq-stirling - Main Entry Point

Exact (p,q)-calculus from the command line:
1. normal-order   normal form of an operator word in X, D, N
2. stirling       Stirling triangles for every variant
3. bell           Bell polynomials
4. touchard       Touchard polynomials (symbolic, or numeric at a point)
5. dobinski       Dobinski sums
6. verify         named identity checks

Exit codes: 0 pass, 1 identity violated or audit discrepancy (0 with --lenient),
2 usage error, 3 numeric nonconvergence.

Usage:
    python main.py stirling --variant general --s 1 --max-n 3 --format latex
"""

import argparse
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from pydantic import BaseModel

from src.models.enums import IDENTITY_ALIASES, IdentityName, OutputFormat, StirlingKind, Verdict, VerifyMode
from src.models.schema import (
    NumericResultDocument,
    OperatorExprDocument,
    PolynomialDocument,
    StirlingVariant,
    polynomial_to_records,
)
from src.renderers import CSVRenderer, JSONRenderer, LaTeXRenderer, RenderError
from src.services.numeric_series import ConvergenceError
from src.services.stirling_service import StirlingError, get_stirling_service
from src.services.touchard_service import TouchardService
from src.services.verification_service import VerificationError, VerificationService
from src.services.word_parser import WordSyntaxError, evaluate_word, parse_word
from src.utils.config import reset_config
from src.utils.logger import configure_logging, get_logger

logger = get_logger(__name__)

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_NONCONVERGENCE = 3


def parse_assignments(items: Optional[List[str]]) -> Dict[str, str]:
    """Parse repeated key=value options"""
    result: Dict[str, str] = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ValueError(f"Expected key=value, got '{item}'")
        result[key.strip()] = value.strip()
    return result


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        allow_abbrev=False,
        description="Exact (p,q)-deformed Stirling, Bell and Touchard calculus",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py normal-order "D X"
  python main.py stirling --variant general --s 1 --max-n 3 --format latex
  python main.py bell --variant touchard --m 2 --n 3 --tilde
  python main.py touchard --n 2 --m 1 --p 1 --q 0.5 --x 1
  python main.py verify exp-id --order 12
  python main.py verify spivey --seed 7 --points 5 --max-n 3
        """,
    )
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value,
                        help="Output document format")
    parser.add_argument("--cache", help="JSON file to load Stirling tables from and save them to")
    parser.add_argument("--point", action="append", metavar="VAR=VALUE",
                        help="Evaluation point for CSV output (default p=q=h=x=1)")
    parser.add_argument("--precision", choices=["double", "decimal"], help="Real-number kernel precision")
    parser.add_argument("--lenient", action="store_true", help="Exit 0 on documented audit discrepancies")
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")

    commands = parser.add_subparsers(dest="command", required=True)

    normal = commands.add_parser("normal-order", allow_abbrev=False, help="Normal-order an operator word")
    normal.add_argument("word", help='Operator word such as "(X^2 D)^3"')

    def add_variant(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--variant", choices=[k.value for k in StirlingKind], default=StirlingKind.PQ.value)
        sub.add_argument("--s", type=int, default=0, help="Shift exponent (general variant)")
        sub.add_argument("--h", help="Rational h (general variant); symbolic when omitted")
        sub.add_argument("--m", type=int, help="Order (touchard variant)")
        sub.add_argument("--tilde", action="store_true", help="Multiply entry (n,k) by p^C(k,2)")

    stirling = commands.add_parser("stirling", allow_abbrev=False, help="Stirling triangle rows 0..max-n")
    add_variant(stirling)
    stirling.add_argument("--max-n", type=int, required=True)

    bell = commands.add_parser("bell", allow_abbrev=False, help="Bell polynomial sum_k S(n,k) x^k")
    add_variant(bell)
    bell.add_argument("--n", type=int, required=True)
    bell.add_argument("--x", help="Rational x; symbolic when omitted")

    touchard = commands.add_parser("touchard", allow_abbrev=False, help="Touchard polynomial T^(m)_n")
    touchard.add_argument("--n", type=int, required=True)
    touchard.add_argument("--m", required=True, help="Order; integer for symbolic output, real with --p --q --x")
    touchard.add_argument("--p")
    touchard.add_argument("--q")
    touchard.add_argument("--x")

    dobinski = commands.add_parser("dobinski", allow_abbrev=False, help="Dobinski sum at a real point")
    dobinski.add_argument("--n", type=int, required=True)
    dobinski.add_argument("--m", required=True)
    dobinski.add_argument("--p", required=True)
    dobinski.add_argument("--q", required=True)
    dobinski.add_argument("--x", required=True)
    dobinski.add_argument("--tol", type=float, help="Series truncation tolerance")

    verify = commands.add_parser("verify", allow_abbrev=False, help="Run a named identity check")
    verify.add_argument("identity", choices=[i.value for i in IdentityName] + list(IDENTITY_ALIASES),
                        metavar="IDENTITY", help="Identity name or short alias")
    verify.add_argument("--mode", choices=[m.value for m in VerifyMode], default=VerifyMode.SYMBOLIC.value)
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--points", type=int)
    verify.add_argument("--tol", type=float)
    verify.add_argument("--order", type=int)
    verify.add_argument("--max-n", type=int)
    verify.add_argument("--param", action="append", metavar="KEY=VALUE",
                        help="Narrow a parameter list, e.g. m=1,2")
    return parser


def build_variant(args: argparse.Namespace) -> StirlingVariant:
    kind = StirlingKind(args.variant)
    return StirlingVariant(
        kind=kind,
        s=args.s if kind == StirlingKind.GENERAL else 0,
        h=args.h if kind == StirlingKind.GENERAL else None,
        m=args.m if kind == StirlingKind.TOUCHARD else None,
        tilde=args.tilde,
    )


def execute(args: argparse.Namespace) -> tuple:
    """Run one command

    Returns:
        (document, verdict) where verdict is None for non-verify commands
    """
    stirling_service = get_stirling_service()

    if args.command == "normal-order":
        word = parse_word(args.word)
        return OperatorExprDocument.from_expr(evaluate_word(word), word=str(word)), None

    if args.command == "stirling":
        return stirling_service.table(build_variant(args), args.max_n).to_document(), None

    if args.command == "bell":
        variant = build_variant(args)
        x = None if args.x is None else Fraction(args.x)
        value = stirling_service.bell(args.n, variant, x)
        params = {"variant": variant.label(), "n": str(args.n), **({"x": str(x)} if x is not None else {})}
        return PolynomialDocument(label="bell", params=params, value=polynomial_to_records(value)), None

    touchard = TouchardService(stirling_service)
    if args.command == "touchard":
        point = [args.p, args.q, args.x]
        if all(v is not None for v in point):
            result = touchard.touchard_numeric(args.n, args.m, args.p, args.q, args.x)
            params = {"n": str(args.n), "m": args.m, "p": args.p, "q": args.q, "x": args.x}
            return NumericResultDocument(label="touchard", params=params, value=str(result.value),
                                         terms_used=result.terms_used), None
        if any(v is not None for v in point):
            raise ValueError("Numeric Touchard needs all of --p, --q and --x")
        value = touchard.touchard_symbolic(args.n, int(args.m)).value
        return PolynomialDocument(label="touchard", params={"n": str(args.n), "m": args.m},
                                  value=polynomial_to_records(value)), None

    if args.command == "dobinski":
        result = touchard.dobinski(args.n, args.m, args.p, args.q, args.x, tol=args.tol)
        params = {"n": str(args.n), "m": args.m, "p": args.p, "q": args.q, "x": args.x}
        return NumericResultDocument(label="dobinski", params=params, value=str(result.value),
                                     terms_used=result.terms_used), None

    service = VerificationService(stirling_service, touchard)
    report = service.run(
        args.identity,
        mode=args.mode,
        seed=args.seed if args.seed is not None else service.config.default_seed,
        points=args.points,
        tol=args.tol,
        order=args.order,
        max_n=args.max_n,
        params=parse_assignments(args.param),
    )
    return report, report.verdict


def render(document: BaseModel, args: argparse.Namespace) -> str:
    output = OutputFormat(args.format)
    if output is OutputFormat.CSV:
        point = {k: Fraction(v) for k, v in parse_assignments(args.point).items()}
        return CSVRenderer(point).render(document)
    if output is OutputFormat.LATEX:
        return LaTeXRenderer().render(document)
    return JSONRenderer().render(document)


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the command and write the document to stdout

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PASS if e.code == 0 else EXIT_USAGE

    # Flags override config for this run
    if args.debug:
        os.environ["PQS_DEBUG"] = "true"
    if args.precision:
        os.environ["PQS_NUMERIC_PRECISION"] = args.precision
    if args.debug or args.precision:
        reset_config()
        configure_logging(force=True)

    try:
        if args.cache:
            get_stirling_service().load_cache(args.cache)
        document, verdict = execute(args)
        sys.stdout.write(render(document, args))
        if args.cache:
            get_stirling_service().save_cache(args.cache)

    except ConvergenceError as e:
        logger.error("Series did not converge", error=str(e))
        print(f"Nonconvergence: {e}", file=sys.stderr)
        return EXIT_NONCONVERGENCE

    except (WordSyntaxError, VerificationError, StirlingError, RenderError, ValueError) as e:
        logger.error("Invalid input", command=args.command, error=str(e))
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if verdict is Verdict.FAIL:
        return EXIT_VIOLATION
    if verdict is Verdict.DISCREPANCY_DOCUMENTED and not args.lenient:
        return EXIT_VIOLATION
    return EXIT_PASS


def main():
    """Main entry point"""
    sys.exit(run())


if __name__ == "__main__":
    main()
