"""Command line: one-shot evaluation, reduction traces, a REPL, table dumps.

Exit codes: 0 success, 1 parse errors, 2 domain errors, 3 numeric failures
(convergence, precision, resource caps).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import replace
from fractions import Fraction

from .engine import NumericContext, adaptive_evaluate, evaluate, trace_reduce
from .errors import (
    ConvergenceError,
    DomainError,
    HypercalcError,
    ParseError,
    PrecisionError,
    ResourceError,
)
from .farey import farey_row
from .rationals import format_fraction
from .terms import RenderStyle, parse, render


def _context(args) -> NumericContext:
    return NumericContext(base=args.base, digits=args.digits, guard_digits=args.guard)


def _add_numeric_flags(sub):
    sub.add_argument("--base", type=int, default=10, help="output base, 2..36")
    sub.add_argument("--digits", type=int, default=20, help="fractional digits")
    sub.add_argument("--guard", type=int, default=10, help="guard digits")
    sub.add_argument(
        "--format", choices=("plain", "json"), default="plain", dest="format_"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypercalc",
        description="evaluate bracket-notation operator expressions to "
        "certified base-b digits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate an expression (or a file of them)")
    p_eval.add_argument("expression", nargs="?", help="expression text")
    p_eval.add_argument("--file", help="read expressions from a file, one per line")
    p_eval.add_argument("--trace", action="store_true", help="include the reduction chain")
    _add_numeric_flags(p_eval)
    p_eval.set_defaults(func=_cmd_eval)

    p_trace = sub.add_parser("trace", help="print the reduction chain then the value")
    p_trace.add_argument("expression")
    _add_numeric_flags(p_trace)
    p_trace.set_defaults(func=_cmd_trace)

    p_repl = sub.add_parser("repl", help="read-evaluate-print loop")
    _add_numeric_flags(p_repl)
    p_repl.set_defaults(func=_cmd_repl)

    p_farey = sub.add_parser("farey", help="print row k of the mediant table")
    p_farey.add_argument("row", type=int)
    p_farey.add_argument("--format", choices=("plain", "json"), default="plain",
                         dest="format_")
    p_farey.set_defaults(func=_cmd_farey)

    p_self = sub.add_parser("selftest", help="run the built-in sanity suites")
    p_self.set_defaults(func=_cmd_selftest)
    return parser


def _result_payload(text: str, ctx, args, trace_lines=None):
    term = parse(text)
    result, expansion = adaptive_evaluate(term, ctx)
    payload = {
        "input": text,
        "canonical": render(term),
        "value": expansion.text(),
        "radius": format_fraction(result.ball().radius),
        "digits": ctx.digits,
    }
    if trace_lines is not None:
        payload["trace"] = trace_lines
    return term, result, payload


def _chain_lines(term, ctx) -> list[str]:
    events = trace_reduce(term, ctx)
    return [ev.after for ev in events[:-1]]


def _emit(payload, args, out):
    if args.format_ == "json":
        print(json.dumps(payload, sort_keys=True), file=out)
    else:
        for line in payload.get("trace", ()):
            print(line, file=out)
        print(payload["value"], file=out)


def _cmd_eval(args, out=sys.stdout) -> int:
    if (args.expression is None) == (args.file is None):
        print("eval needs an expression or --file", file=sys.stderr)
        return 1
    ctx = _context(args)
    if args.expression is not None:
        texts = [args.expression]
    else:
        with open(args.file, encoding="utf-8") as fh:
            texts = [
                line.strip()
                for line in fh
                if line.strip() and not line.strip().startswith("#")
            ]
    for text in texts:
        term = parse(text)
        trace_lines = _chain_lines(term, ctx) if args.trace else None
        _, _, payload = _result_payload(text, ctx, args, trace_lines)
        _emit(payload, args, out)
    return 0


def _cmd_trace(args, out=sys.stdout) -> int:
    ctx = _context(args)
    term = parse(args.expression)
    trace_lines = _chain_lines(term, ctx)
    _, _, payload = _result_payload(args.expression, ctx, args, trace_lines)
    _emit(payload, args, out)
    return 0


def _cmd_repl(args, out=sys.stdout) -> int:
    ctx = _context(args)
    interactive = sys.stdin.isatty()
    while True:
        if interactive:
            out.write("hyper> ")
            out.flush()
        line = sys.stdin.readline()
        if not line:
            return 0
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line == ":quit":
            return 0
        if line.startswith(":base"):
            try:
                ctx = replace(ctx, base=int(line.split()[1]))
            except (IndexError, ValueError) as err:
                print(f"error: {err}", file=out)
            continue
        if line.startswith(":digits"):
            try:
                ctx = replace(ctx, digits=int(line.split()[1]))
            except (IndexError, ValueError) as err:
                print(f"error: {err}", file=out)
            continue
        try:
            term = parse(line)
            _, expansion = adaptive_evaluate(term, ctx)
            print(expansion.text(), file=out)
        except HypercalcError as err:
            print(f"error: {err}", file=out)
    return 0


def _cmd_farey(args, out=sys.stdout) -> int:
    entries = farey_row(args.row)
    texts = [f"{e.top}/{e.bottom}" for e in entries]
    if args.format_ == "json":
        print(json.dumps({"row": args.row, "entries": texts}), file=out)
    else:
        print(" ".join(texts), file=out)
    return 0


def _cmd_selftest(args, out=sys.stdout) -> int:
    from .hyperops import hyper_forward, hyper_inverse_minus

    rng = random.Random(20240814)
    passed = failed = 0

    def check(name, ok):
        nonlocal passed, failed
        if ok:
            passed += 1
        else:
            failed += 1
            print(f"FAIL {name}", file=out)

    for i in range(200):
        t = _random_term(rng, 6)
        check(f"roundtrip-{i}", parse(render(t)) == t)
    ctx = NumericContext(digits=12, guard_digits=8)
    for text, expected in [
        ("[1+1]", Fraction(2)),
        ("[1-1]", Fraction(0)),
        ("[[1+1]++[1+1]]", Fraction(4)),
        ("[[1+[1+1]]--[1+1]]", Fraction(3, 2)),
    ]:
        check(f"exact {text}", evaluate(parse(text), ctx).value == expected)
    tol = Fraction(1, 10**12)
    for rank in (4, 5, 6):
        a = Fraction(rng.randrange(5, 40), rng.randrange(1, 4))
        if a <= 1:
            a += 1
        check(f"identity r{rank} b0", hyper_forward(rank, a, Fraction(0), tol).center == 1)
        check(f"identity r{rank} b1", hyper_forward(rank, a, Fraction(1), tol).center == a)
        check(
            f"identity r{rank} root1",
            hyper_inverse_minus(rank, a, Fraction(1), tol).center == a,
        )
    check("tower 2^^3", hyper_forward(4, Fraction(2), Fraction(3), tol).center == 16)
    print(f"selftest: {passed} passed, {failed} failed", file=out)
    return 0 if failed == 0 else 3


def _random_term(rng, max_depth):
    from .terms import Leaf, Node, OpKind, Operator

    if max_depth == 0 or rng.random() < 0.3:
        return Leaf()
    op = Operator(rng.choice(list(OpKind)), rng.randrange(1, 6))
    return Node(
        op,
        _random_term(rng, max_depth - 1),
        _random_term(rng, max_depth - 1),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return 1
    except DomainError as err:
        print(f"domain error: {err}", file=sys.stderr)
        return 2
    except (ConvergenceError, PrecisionError, ResourceError) as err:
        print(f"numeric error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
