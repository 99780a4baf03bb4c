"""Command-line interface.

    lambdamachines parse   EXPR
    lambdamachines reduce  --strategy S [--max-steps N] [--trace] EXPR
    lambdamachines run     --machine M [--trace plain|refocus|json] [--max-steps N] EXPR
    lambdamachines bench   --family size-explosion --n-max N [--machines kn,mam] [--format csv|json]
    lambdamachines compare --machines kn,mam [--strategy S] [--random N --seed S | EXPR ...]

Expressions come as a positional argument or from ``--file``.  ``add-*``
machines read additive syntax (``(1+2)+(4+8)``), everything else reads lambda
syntax.  Exit codes: 0 success, 1 fuel exhausted, 2 parse or usage error,
3 comparison mismatch, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import additive as A
from . import core, harness
from .errors import (
    FuelExhausted,
    InvariantViolation,
    LambdaMachinesError,
    ParseError,
    UnsupportedStyle,
)
from .machines import ADDITIVE, MACHINES, STRATEGY
from .strategies import Strategy, reduction_sequence
from .terms import parse, show, to_indices

EXIT_OK, EXIT_FUEL, EXIT_USAGE, EXIT_MISMATCH, EXIT_BUG = 0, 1, 2, 3, 4


def _read_input(args: argparse.Namespace) -> str:
    if getattr(args, "file", None):
        with open(args.file, encoding="utf-8") as fh:
            return fh.read().strip()
    if not args.expr:
        raise ParseError("no input expression given", 0)
    return args.expr


def _cmd_parse(args, out) -> int:
    src = _read_input(args)
    if args.additive:
        e = A.parse_additive(src)
        print(A.show(e), file=out)
        return EXIT_OK
    t = parse(src)
    print(show(t), file=out)
    try:
        print(show(to_indices(t)), file=out)
    except LambdaMachinesError:
        pass
    return EXIT_OK


def _cmd_reduce(args, out) -> int:
    t = parse(_read_input(args))
    seq = reduction_sequence(Strategy(args.strategy), t, args.max_steps)
    if args.trace:
        for i, u in enumerate(seq):
            print(f"{i}: {show(u)}", file=out)
    print(f"steps: {len(seq) - 1}", file=out)
    print(f"normal form: {show(seq[-1])}", file=out)
    return EXIT_OK


def _cmd_run(args, out) -> int:
    machine = MACHINES[args.machine]
    src = _read_input(args)
    source = A.parse_additive(src) if args.machine in ADDITIVE else parse(src)
    want_trace = args.trace is not None
    style = harness.RenderStyle(args.trace) if want_trace else None
    if style is harness.RenderStyle.REFOCUS and machine.decode is None:
        raise UnsupportedStyle(f"machine {machine.name} has no decoder for refocusing notation")
    try:
        res = core.run(machine, source, args.max_steps, trace=want_trace)
    except FuelExhausted as exc:
        if style is harness.RenderStyle.JSON:
            print(_json(machine, exc.trace, src, exc.stats, None, "fuel-exhausted"), file=out)
        else:
            if want_trace and exc.trace is not None:
                print(harness.render_trace(machine, exc.trace, style), file=out)
            print(f"fuel exhausted after {exc.stats.total} steps", file=sys.stderr)
        return EXIT_FUEL
    result = harness.render_value(machine, res.value)
    if style is harness.RenderStyle.JSON:
        print(_json(machine, res.trace, src, res.stats, result, "halted"), file=out)
        return EXIT_OK
    if want_trace:
        print(harness.render_trace(machine, res.trace, style), file=out)
    print(f"result: {result}", file=out)
    print(f"steps: {res.stats.total}  beta: {res.stats.beta}", file=out)
    return EXIT_OK


def _json(machine, trace, src, stats, result, status) -> str:
    doc = harness.trace_document(machine, trace, source=src, stats=stats, result=result, status=status)
    return json.dumps(doc, ensure_ascii=False, indent=2)


def _cmd_bench(args, out) -> int:
    machines = _machine_list(args.machines)
    report = harness.bench(args.family, args.n_max, machines, n_min=args.n_min, fuel=args.max_steps)
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2), file=out)
    else:
        print(report.to_csv(), file=out)
    return EXIT_OK


def _cmd_compare(args, out) -> int:
    machines = _machine_list(args.machines)
    for m in machines:
        if m in ADDITIVE:
            raise ParseError(f"compare works on lambda machines, not {m}", 0)
    if args.expr:
        inputs = [parse(e) for e in args.expr]
    elif args.random:
        gen = harness.gen_terms("closed-random", args.size, args.seed)
        inputs = [next(gen) for _ in range(args.random)]
    else:
        inputs = harness.sn_corpus()
    report = harness.compare(machines, args.strategy, inputs, fuel=args.max_steps)
    for v in report.verdicts if args.verbose else report.mismatches():
        print(f"{v.machine}\t{v.status}\t{v.input}\t{v.detail}", file=out)
    print(report.summary(), file=out)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def _machine_list(spec: str) -> list[str]:
    names = [m.strip() for m in spec.split(",") if m.strip()]
    for m in names:
        if m not in MACHINES:
            raise ParseError(f"unknown machine {m!r}", 0)
    return names


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lambdamachines", description="Reduction strategies and abstract machines.")
    sub = p.add_subparsers(dest="command", required=True)

    def inputs(sp):
        sp.add_argument("expr", nargs="?", help="expression (or use --file)")
        sp.add_argument("--file", help="read the expression from a file")

    sp = sub.add_parser("parse", help="parse and pretty-print a term")
    inputs(sp)
    sp.add_argument("--additive", action="store_true", help="read additive syntax")
    sp.set_defaults(func=_cmd_parse)

    sp = sub.add_parser("reduce", help="reduce a term with a strategy")
    inputs(sp)
    sp.add_argument("--strategy", required=True, choices=[s.value for s in Strategy])
    sp.add_argument("--max-steps", type=int, default=10_000)
    sp.add_argument("--trace", action="store_true", help="print every intermediate term")
    sp.set_defaults(func=_cmd_reduce)

    sp = sub.add_parser("run", help="run an abstract machine")
    inputs(sp)
    sp.add_argument("--machine", required=True, choices=list(MACHINES))
    sp.add_argument("--trace", choices=[s.value for s in harness.RenderStyle])
    sp.add_argument("--max-steps", type=int, default=10_000)
    sp.set_defaults(func=_cmd_run)

    sp = sub.add_parser("bench", help="step counts over a term family")
    sp.add_argument("--family", default="size-explosion", choices=list(harness.FAMILIES))
    sp.add_argument("--n-max", type=int, default=10)
    sp.add_argument("--n-min", type=int, default=1)
    sp.add_argument("--machines", default="kn,mam")
    sp.add_argument("--format", default="csv", choices=["csv", "json"])
    sp.add_argument("--max-steps", type=int, default=10_000_000)
    sp.set_defaults(func=_cmd_bench)

    sp = sub.add_parser("compare", help="check machines against their strategy oracles")
    sp.add_argument("expr", nargs="*", help="terms to compare on (default: the corpus)")
    sp.add_argument("--machines", default=",".join(STRATEGY))
    sp.add_argument("--strategy", choices=[s.value for s in Strategy], help="override the oracle")
    sp.add_argument("--random", type=int, default=0, help="use N random closed terms")
    sp.add_argument("--size", type=int, default=12, help="size bound for random terms")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-steps", type=int, default=10_000)
    sp.add_argument("--verbose", action="store_true")
    sp.set_defaults(func=_cmd_compare)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "max_steps", 1) <= 0:
        print("error: --max-steps must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except FuelExhausted as exc:
        print(f"fuel exhausted after {exc.steps} steps", file=sys.stderr)
        return EXIT_FUEL
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        if exc.config is not None:
            print(f"configuration: {exc.config}", file=sys.stderr)
        return EXIT_BUG
    except (LambdaMachinesError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
