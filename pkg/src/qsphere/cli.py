"""Command-line entry point.

Exit codes: 0 success, 1 a verification found a counterexample, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import __version__

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2

# "lemma34" is kept as an alias of "limits" for scripts written against the original interface
SCAN_CHOICES = {"limits": "limits", "lemma34": "limits", "oscillation": "oscillation"}


class UsageError(Exception):
    pass


def parse_q0(text: str) -> Fraction:
    try:
        q0 = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"invalid q0 {text!r}") from None
    if not 0 < q0 < 1:
        raise UsageError("q0 must lie in (0, 1)")
    return q0


def parse_int_range(text: str) -> list[int]:
    """'4..16' (inclusive), '4..16:2', or a single integer."""
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*(?::\s*(\d+))?\s*", text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        step = int(m.group(3) or 1)
        if step <= 0 or hi < lo:
            raise UsageError(f"empty range {text!r}")
        return list(range(lo, hi + 1, step))
    try:
        return [int(text)]
    except ValueError:
        raise UsageError(f"invalid range {text!r}") from None


def parse_fraction_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"invalid list {text!r}") from None


def parse_eps_grid(text: str) -> list[float]:
    """'2^-2..2^-12' with exponent step 2 by default, '2^-2..2^-12:1', or a comma list of 'b^e' / decimals."""
    m = re.fullmatch(r"\s*(\d+)\^(-?\d+)\s*\.\.\s*(\d+)\^(-?\d+)\s*(?::\s*(\d+))?\s*", text)
    if m:
        base, e1, base2, e2 = int(m.group(1)), int(m.group(2)), int(m.group(3)), int(m.group(4))
        step = int(m.group(5) or 2)
        if base != base2 or base < 2 or step <= 0:
            raise UsageError(f"invalid epsilon grid {text!r}")
        direction = -1 if e2 < e1 else 1
        return [float(Fraction(base) ** e) for e in range(e1, e2 + direction, direction * step)]
    out = []
    for item in text.split(","):
        item = item.strip()
        m = re.fullmatch(r"(\d+)\^(-?\d+)", item)
        try:
            out.append(float(Fraction(int(m.group(1))) ** int(m.group(2))) if m else float(item))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"invalid epsilon {item!r}") from None
    if not out or any(not e > 0 for e in out):
        raise UsageError("epsilon values must be positive")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="table output format")
    common.add_argument("--output", help="write the result to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")

    parser = argparse.ArgumentParser(prog="qsphere", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run an exact identity suite")
    p.add_argument("suite", choices=("algebra", "calculus", "cocycles", "bott"))

    p = sub.add_parser("nf", parents=[common], help="print the normal form of an expression")
    p.add_argument("expr")

    p = sub.add_parser("haar", parents=[common], help="exact Haar state of an expression")
    p.add_argument("expr")

    p = sub.add_parser(
        "pair", parents=[common],
        help="exact index pairing; 'tau' is paired in the normalization -q^-1 tau",
        description="Pair a named cocycle with the line-bundle idempotent of charge n. "
                    "The volume cocycle is paired as -q^-1 tau, so n=1 gives -1.",
    )
    p.add_argument("--cocycle", required=True, help="tau, tau1, tau2, tauTilde or tauPrime")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("bott", parents=[common], help="dump the idempotent of charge n as JSON")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("heat", parents=[common], help="heat-trace scans")
    p.add_argument("--scan", choices=SCAN_CHOICES, required=True,
                   help="limits: the three small-eps columns at c=1; oscillation: eps*Tr along c q0^(2m)")
    p.add_argument("--q0", default="1/2")
    p.add_argument("--m", default="4..16", help="inclusive range a..b")
    p.add_argument("--c", default=None, help="comma-separated grid offsets in (q0^2, 1] (oscillation)")

    p = sub.add_parser("jlo", parents=[common], help="psi_2 against its predicted small-eps expansion")
    p.add_argument("--q0", default="1/2")
    p.add_argument("--d", type=int, default=12)
    p.add_argument("--eps", default="2^-2..2^-12", help="grid b^e1..b^e2[:step], exponent step 2 by default")
    p.add_argument("--triple", default="1;g* * g;g* * g", help="three expressions separated by ';'")
    return parser


def _emit(text: str, args) -> None:
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _value_output(value: str, args) -> str:
    if args.format == "json":
        return json.dumps({"value": value}) + "\n"
    return value + "\n"


def _rows_json(rows) -> str:
    def conv(v):
        return str(v) if isinstance(v, Fraction) else v

    return json.dumps([{k: conv(v) for k, v in r.__dict__.items()} for r in rows], indent=1) + "\n"


def run(args) -> int:
    if args.command == "verify":
        from .verify import SUITES

        suite = SUITES[args.suite]
        results = suite(seed=args.seed) if args.suite in ("algebra", "cocycles") else suite()
        lines = [r.line() for r in results]
        if args.format == "json":
            text = json.dumps([r.__dict__ for r in results], indent=1) + "\n"
        else:
            text = "\n".join(lines) + "\n"
        _emit(text, args)
        failed = [r for r in results if not r.passed]
        if failed:
            print(f"counterexample in '{failed[0].name}': {failed[0].detail}", file=sys.stderr)
            return EXIT_COUNTEREXAMPLE
        return EXIT_OK

    if args.command in ("nf", "haar"):
        from .calculus import haar
        from .exprparse import parse_element, print_element

        x = parse_element(args.expr)
        value = print_element(x) if args.command == "nf" else str(haar(x))
        _emit(_value_output(value, args), args)
        return EXIT_OK

    if args.command == "pair":
        from .bott import bott
        from .cohomology import CocycleError, named_cocycle, pair_bB, pair_cyclic
        from .qscalar import Q_INV

        try:
            f = named_cocycle(args.cocycle)
            p = bott(args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        try:
            if f.degree % 2:
                raise UsageError(f"{args.cocycle} has odd degree and does not pair with projections")
            if not f.twisted:
                value = pair_bB({f.degree: f}, p)
            elif args.cocycle == "tau":
                value = pair_cyclic(f.scale(-Q_INV), p)
            else:
                value = pair_cyclic(f, p)
        except CocycleError as exc:
            print(str(exc), file=sys.stderr)
            return EXIT_COUNTEREXAMPLE
        _emit(_value_output(str(value), args), args)
        return EXIT_OK

    if args.command == "bott":
        from .bott import bott

        try:
            p = bott(args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _emit(p.to_json() + "\n", args)
        return EXIT_OK

    if args.command == "heat":
        from .spectral import heat_limit_scan, oscillation_scan, rows_to_csv

        q0 = parse_q0(args.q0)
        ms = parse_int_range(args.m)
        if SCAN_CHOICES[args.scan] == "limits":
            rows = heat_limit_scan(q0, ms)
        else:
            cs = parse_fraction_list(args.c) if args.c else [Fraction(1), q0]
            try:
                rows = oscillation_scan(q0, cs, ms)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        _emit(rows_to_csv(rows) if args.format == "csv" else _rows_json(rows), args)
        return EXIT_OK

    if args.command == "jlo":
        from .exprparse import parse_element
        from .jlo import build_model, residual_csv, residual_table

        q0 = parse_q0(args.q0)
        if args.d < 2:
            raise UsageError("cutoff d must be at least 2")
        eps = parse_eps_grid(args.eps)
        parts = args.triple.split(";")
        if len(parts) != 3:
            raise UsageError("--triple needs exactly three expressions separated by ';'")
        b0, b1, b2 = (parse_element(s) for s in parts)
        model = build_model(q0, args.d)
        try:
            rows = residual_table(model, eps, b0, b1, b2)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _emit(residual_csv(rows) if args.format == "csv" else _rows_json(rows), args)
        return EXIT_OK

    raise UsageError(f"unknown command {args.command}")


def main(argv: list[str] | None = None) -> int:
    from .exprparse import ParseError

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except (UsageError, ParseError) as exc:
        print(f"qsphere: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
