"""Command-line front end.

Every subcommand prints stable, machine-parseable key=value lines (the
census additionally has an aligned text form).  Numeric arguments
accept decimal or 0x-prefixed hex.  Exit codes: 0 success, 1 usage or
domain error, 2 verification mismatch, 3 benchmark checksum mismatch.
"""

import argparse
import sys

from . import bench as bench_mod
from .census import run_census
from .costmodel import SKYLAKE_X, estimate, load_cost_table
from .emitter import EmitTarget, emit
from .errors import ChecksumMismatchError, DivMagicError
from .evaluator import Domain, verify
from .lowering import (
    CompareSelect,
    GmThreeShift,
    Identity,
    MulShift,
    NaiveWideShift,
    Shift,
    Strategy,
    WideMulHi,
    classify,
    lower,
    to_instr_seq,
)
from .magic import Width, compute_magic

__all__ = ["main", "entry"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we reserve that
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _uint(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return value


def _uint_list(text: str) -> tuple[int, ...]:
    items = tuple(_uint(t) for t in text.split(",") if t)
    if not items:
        raise argparse.ArgumentTypeError("empty list")
    return items


def _name_list(text: str) -> tuple[str, ...]:
    items = tuple(t.strip() for t in text.split(",") if t.strip())
    if not items:
        raise argparse.ArgumentTypeError("empty list")
    return items


def _fmt(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else f"{value:g}"


def _strategy_fields(s: Strategy) -> str:
    if isinstance(s, (Identity, CompareSelect)):
        return ""
    if isinstance(s, Shift):
        return f" k={s.k}"
    if isinstance(s, MulShift):
        return f" c=0x{s.c:x} a={s.a}"
    if isinstance(s, GmThreeShift):
        return f" c_lo=0x{s.c_lo:x} s={s.s} a={s.a}"
    if isinstance(s, WideMulHi):
        return f" k=0x{s.k:x} a={s.a}"
    if isinstance(s, NaiveWideShift):
        return f" c=0x{s.c:x} a={s.a}"
    raise TypeError(s)


def cmd_magic(args) -> int:
    width = Width(args.width)
    m = compute_magic(args.d, width)
    case = classify(args.d, width)
    print(
        f"d={m.d} width={width.w} c=0x{m.c:x} a={m.a} c_bits={m.c_bits} "
        f"case={case.token(width)}"
    )
    return 0


def cmd_lower(args) -> int:
    width = Width(args.width)
    for s in lower(args.d, width, args.variant):
        print(f"d={s.d} width={width.w} variant={s.name}{_strategy_fields(s)}")
    return 0


def _report_line(report) -> str:
    line = (
        f"d={report.d} width={report.width.w} variant={report.variant} "
        f"mismatches={report.mismatches} domain={report.tested}"
    )
    if report.first is not None:
        line += (
            f" first_x={report.first.x} got={report.first.got}"
            f" expected={report.first.expected}"
        )
    return line


def _domain_from_args(args) -> Domain:
    if args.exhaustive:
        return Domain.exhaustive()
    n = args.sample if args.sample is not None else 65536
    return Domain.sample(n, args.seed)


def cmd_verify(args) -> int:
    width = Width(args.width)
    domain = _domain_from_args(args)
    variants = [args.variant]
    if args.variant == "all":
        variants = [s.name for s in lower(args.d, width, "all")]
    bad = 0
    for v in variants:
        report = verify(args.d, width, v, domain, jobs=args.jobs)
        print(_report_line(report))
        bad += report.mismatches
    return 2 if bad else 0


def cmd_verify_all(args) -> int:
    width = Width(args.width)
    if width.w > 16:
        raise DivMagicError(
            f"exhaustive verify-all is infeasible at width {width.w}; use width 8 or 16"
        )
    checks = 0
    bad = 0
    for d in range(1, width.max_dividend + 1):
        for s in lower(d, width, "all"):
            report = verify(d, width, s.name, Domain.exhaustive(), jobs=1)
            checks += 1
            if report.mismatches:
                bad += report.mismatches
                print(_report_line(report))
    print(
        f"width={width.w} divisors={width.max_dividend} checks={checks} mismatches={bad}"
    )
    return 2 if bad else 0


def cmd_census(args) -> int:
    width = Width(args.width)
    if args.full:
        report = run_census(width, full=True, jobs=args.jobs)
    else:
        n = args.sample if args.sample is not None else 1_000_000
        report = run_census(width, n=n, seed=args.seed, jobs=args.jobs)
    if args.machine:
        for line in report.machine_lines():
            print(line)
    else:
        print(report.text())
    return 0


def cmd_cost(args) -> int:
    width = Width(args.width)
    table = load_cost_table(args.table) if args.table else SKYLAKE_X
    for s in lower(args.d, width, args.variant):
        est = estimate(to_instr_seq(s), table)
        print(
            f"variant={s.name} latency={_fmt(est.latency)} "
            f"tput={_fmt(est.throughput_cost)} inloop={est.in_loop_count}"
        )
    return 0


def cmd_emit(args) -> int:
    width = Width(args.width)
    target = EmitTarget.from_token(args.target)
    name = args.name or f"udiv{args.d}"
    strategies = lower(args.d, width, args.variant)
    text = "\n".join(emit(s, target, name) for s in strategies)
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench(args) -> int:
    result = bench_mod.run_bench(
        divisors=args.divisors, n=args.n, repeat=args.repeat, variants=args.variants
    )
    for d in result.divisors:
        for v in result.variants:
            print(
                f"d={d} variant={v} n={result.n} repeat={result.repeat} "
                f"mean={result.means[(d, v)]:.6f} std={result.stdevs[(d, v)]:.6f} "
                f"checksum=0x{result.checksums[(d, v)]:x}"
            )
        if "gm" in result.variants:
            for v in result.variants:
                if v == "gm":
                    continue
                print(
                    f"d={d} variant={v} time_ratio_vs_gm={result.time_ratio(d, v):.3f} "
                    f"speedup_vs_gm={result.speedup(d, v):.3f}"
                )
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="divmagic", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        return p

    def add_width(p, default=32):
        p.add_argument("--width", type=_uint, default=default, help="dividend bit width")

    p = add("magic", cmd_magic, "compute the minimal magic pair (c, a) for a divisor")
    p.add_argument("d", type=_uint)
    add_width(p)

    p = add("lower", cmd_lower, "lower a divisor to strategy variants")
    p.add_argument("d", type=_uint)
    p.add_argument("--variant", default="auto", choices=["auto", "gm", "wide", "naive", "all"])
    add_width(p)

    p = add("verify", cmd_verify, "differentially test a lowering against floor division")
    p.add_argument("d", type=_uint)
    p.add_argument("--variant", default="auto", choices=["auto", "gm", "wide", "naive", "all"])
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exhaustive", action="store_true", help="test every dividend")
    group.add_argument("--sample", type=_uint, default=None, help="sample size (default 65536)")
    p.add_argument("--seed", type=_uint, default=0)
    p.add_argument("--jobs", type=_uint, default=None, help="worker threads")
    add_width(p)

    p = add("verify-all", cmd_verify_all, "exhaustively verify every divisor at a small width")
    add_width(p, default=8)
    p.add_argument("--jobs", type=_uint, default=None)

    p = add("census", cmd_census, "count divisors whose multiplier needs w+1 bits")
    add_width(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--full", action="store_true", help="enumerate every divisor")
    group.add_argument(
        "--sample", type=_uint, default=None, help="sample size (default 1000000)"
    )
    p.add_argument("--seed", type=_uint, default=1)
    p.add_argument("--jobs", type=_uint, default=None)
    p.add_argument("--machine", action="store_true", help="key=value lines only")

    p = add("cost", cmd_cost, "estimate latency/throughput of the lowerings")
    p.add_argument("d", type=_uint)
    p.add_argument("--variant", default="all", choices=["auto", "gm", "wide", "naive", "all"])
    p.add_argument("--table", default=None, help="cost table file (default: built-in skylake-x)")
    add_width(p)

    p = add("emit", cmd_emit, "emit C or assembly for a lowering")
    p.add_argument("d", type=_uint)
    p.add_argument("--target", required=True, choices=["c", "x86-64", "aarch64"])
    p.add_argument("--variant", default="auto", choices=["auto", "gm", "wide", "naive", "all"])
    p.add_argument("--name", default=None, help="symbol name (default udiv<d>)")
    p.add_argument("-o", "--output", default=None, help="write to file instead of stdout")
    add_width(p)

    p = add("bench", cmd_bench, "time the 33-bit-case lowerings with native kernels")
    p.add_argument("--divisors", type=_uint_list, default=(7, 19, 107))
    p.add_argument("--n", type=_uint, default=1 << 27, help="loop bound (dividends 0..n-1)")
    p.add_argument("--repeat", type=_uint, default=10)
    p.add_argument("--variants", type=_name_list, default=("gm", "wide"))

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ChecksumMismatchError as exc:
        print(f"divmagic: benchmark checksum mismatch: {exc}", file=sys.stderr)
        return 3
    except DivMagicError as exc:
        print(f"divmagic: error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())
