from __future__ import annotations

import argparse
import hashlib
import random
import sys
from fractions import Fraction
from typing import Sequence

from ..builder import build_counter, build_fixture, build_square, derive_parameters
from ..builder.result import GeneratedTas
from ..builder.templates import BuildError
from ..competition import competition_probability, read_gadget_probability
from ..dynamics import forced_terminal, run_sequence
from ..exact import enumerate_dag, exact_terminal_probabilities
from ..montecarlo import estimate_shape_probability
from ..verifier import CheckStatus, check_structure, verify
from .formats import ParseError, dump_decl, dump_shape, dump_tas, parse_decl, parse_shape, parse_tas, read_text, write_text
from .render import render_ascii, render_svg

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def rational(text: str) -> Fraction:
    """``p/q`` or an exact decimal."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def show(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator} ({float(x):.12g})"


def domain_hash(domain) -> str:
    text = ";".join(f"{x},{y}" for x, y in sorted(domain))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


# -- commands ------------------------------------------------------------------


def _emit(g: GeneratedTas, args, comments) -> int:
    tas_text = dump_tas(g.tas, comments)
    decl_text = dump_decl(g.decl)
    shape_text = dump_shape(g.expected_domain)
    write_text(args.out, tas_text)
    write_text(args.decl, decl_text)
    write_text(args.shape, shape_text)
    # read everything back and check it against itself
    tas = parse_tas(read_text(args.out), args.out)
    decl = parse_decl(read_text(args.decl), args.decl).declaration()
    shape = parse_shape(read_text(args.shape), args.shape)
    print(f"tiles={g.tile_count} r={g.r}")
    res = check_structure(tas, decl, shape, g.reference)
    if res.status is not CheckStatus.PASS:
        print(res, file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_build_counter(args) -> int:
    n = args.n if args.n is not None else args.N
    try:
        params = derive_parameters(args.N, args.delta, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    g = build_counter(params)
    return _emit(g, args, [f"counter N={args.N} delta={args.delta} n={n} h={params.h} m={params.m} k={params.k}"])


def cmd_build_square(args) -> int:
    if args.N < 1 or not 0 < args.delta < 1:
        raise UsageError("need N >= 1 and 0 < delta < 1")
    g = build_square(args.N, args.delta)
    return _emit(g, args, [f"square N={args.N} delta={args.delta}"])


def cmd_build_fixture(args) -> int:
    try:
        g = build_fixture(args.name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return _emit(g, args, [f"fixture {args.name}"])


def cmd_simulate(args) -> int:
    tas = parse_tas(read_text(args.tas), args.tas)
    shape = parse_shape(read_text(args.shape), args.shape)
    if args.trials < 1 or args.cap < 1:
        raise UsageError("--trials and --cap must be positive")
    if not 0 < args.confidence < 100:
        raise UsageError("--confidence is a percentage in (0, 100)")
    est = estimate_shape_probability(
        tas, shape, args.trials, args.seed, args.cap, confidence=args.confidence / 100, workers=args.workers
    )
    print(est.line())
    return EXIT_OK


def cmd_exact(args) -> int:
    tas = parse_tas(read_text(args.tas), args.tas)
    dag = enumerate_dag(tas, size_cap=args.size_cap, node_cap=args.node_cap)
    table = exact_terminal_probabilities(dag)
    rows = sorted(table.items(), key=lambda kv: (-kv[1], kv[0].key()))
    for a, p in rows:
        print(f"{domain_hash(a.domain)} {len(a)} {p.numerator}/{p.denominator}")
    if dag.partial:
        print(f"partial: caps reached, unresolved mass {1 - sum(table.values())}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    chosen = [args.lwin is not None or args.llose is not None, args.h is not None, args.decl is not None]
    if sum(chosen) != 1:
        raise UsageError("give exactly one of --lwin/--llose, --h or --decl")
    if chosen[0]:
        if args.lwin is None or args.llose is None:
            raise UsageError("--lwin and --llose go together")
        if args.lwin < 2 or args.llose < 2:
            raise UsageError("path lengths must be at least 2")
        print(show(competition_probability(args.lwin, args.llose)))
    elif chosen[1]:
        if args.h < 6:
            raise UsageError("--h must be at least 6")
        print(show(read_gadget_probability(args.h)))
    else:
        df = parse_decl(read_text(args.decl), args.decl)
        if not df.entries:
            raise DataError(f"{args.decl}: no contested points")
        for e in df.entries:
            p = Fraction(1) if e.rigged else competition_probability(e.l_win, e.l_lose)
            tag = " rigged" if e.rigged else ""
            print(f"poc {e.poc.x} {e.poc.y} lwin={e.l_win} llose={e.l_lose}{tag}: {show(p)}")
        print(show(df.lower_bound()))
    return EXIT_OK


def _load_decl(path):
    df = parse_decl(read_text(path), path)
    if not df.has_paths:
        raise DataError(f"{path}: race paths are required here")
    return df.declaration()


def cmd_verify(args) -> int:
    tas = parse_tas(read_text(args.tas), args.tas)
    decl = _load_decl(args.decl)
    shape = parse_shape(read_text(args.shape), args.shape) if args.shape else None
    report = verify(
        tas,
        decl,
        expected_domain=shape,
        size_cap=args.size_cap,
        node_cap=args.node_cap,
        trials=args.trials,
        seed=args.seed,
        step_cap=args.step_cap,
    )
    print(report.render())
    return EXIT_VERIFY if report.failed else EXIT_OK


def cmd_render(args) -> int:
    tas = parse_tas(read_text(args.tas), args.tas)
    if (args.sample_seed is None) == (not args.exact_correct):
        raise UsageError("give exactly one of --sample-seed or --exact-correct")
    pocs = ()
    if args.exact_correct:
        if not args.decl:
            raise UsageError("--exact-correct needs --decl")
        df = parse_decl(read_text(args.decl), args.decl)
        pocs = [e.poc for e in df.entries]
        a = forced_terminal(tas, {e.poc: e.winner for e in df.entries}, args.cap)
    else:
        if args.decl:
            pocs = [e.poc for e in parse_decl(read_text(args.decl), args.decl).entries]
        a = run_sequence(tas, random.Random(args.sample_seed), args.cap).final
    text = render_ascii(a) if args.format == "ascii" else render_svg(a, pocs)
    write_text(args.out, text)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tileasm", description="Temperature-1 tile assembly: build, simulate, analyze, verify, render.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def outputs(sp):
        sp.add_argument("--out", required=True, help="tile set file to write")
        sp.add_argument("--decl", required=True, help="race declaration file to write")
        sp.add_argument("--shape", required=True, help="expected shape file to write")

    sp = sub.add_parser("build-counter", help="counter of height n")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--delta", type=rational, required=True)
    sp.add_argument("--n", type=int)
    outputs(sp)
    sp.set_defaults(func=cmd_build_counter)

    sp = sub.add_parser("build-square", help="N x N square")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--delta", type=rational, required=True)
    outputs(sp)
    sp.set_defaults(func=cmd_build_square)

    sp = sub.add_parser("build-fixture", help="small worked example")
    sp.add_argument("--name", required=True)
    outputs(sp)
    sp.set_defaults(func=cmd_build_fixture)

    sp = sub.add_parser("simulate", help="Monte Carlo shape probability")
    sp.add_argument("--tas", required=True)
    sp.add_argument("--shape", required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--cap", type=int, default=10_000_000)
    sp.add_argument("--confidence", type=float, default=99.0, help="percent")
    sp.add_argument("--workers", type=int, default=None)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("exact", help="exact terminal probabilities")
    sp.add_argument("--tas", required=True)
    sp.add_argument("--size-cap", type=int, default=10_000)
    sp.add_argument("--node-cap", type=int, default=1_000_000)
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("analyze", help="race probabilities in closed form")
    sp.add_argument("--lwin", type=int)
    sp.add_argument("--llose", type=int)
    sp.add_argument("--h", type=int)
    sp.add_argument("--decl")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("verify", help="check the race hypotheses")
    sp.add_argument("--tas", required=True)
    sp.add_argument("--decl", required=True)
    sp.add_argument("--shape")
    sp.add_argument("--size-cap", type=int, default=64)
    sp.add_argument("--node-cap", type=int, default=20_000)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--step-cap", type=int, default=10_000_000)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("render", help="draw an assembly")
    sp.add_argument("--tas", required=True)
    sp.add_argument("--sample-seed", type=int)
    sp.add_argument("--exact-correct", action="store_true")
    sp.add_argument("--decl")
    sp.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    sp.add_argument("--out", required=True)
    sp.add_argument("--cap", type=int, default=10_000_000)
    sp.set_defaults(func=cmd_render)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, DataError, BuildError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
