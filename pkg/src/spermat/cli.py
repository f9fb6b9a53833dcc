"""Command-line front end: ``spermat {classes,count,verify,convert,sample}``.

Exit codes: 0 success, 1 verification mismatch, 2 input or validation error,
3 infeasible size.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import secrets
import sys
from pathlib import Path

from . import __version__
from .counting import full_report, render_decimal
from .errors import InfeasibleSize, SpermatError, UndefinedForN1
from .formats import format_sperm_text, pi_to_json, read_matrix
from .graphs import ClassTable, load_class_table
from .matrix import PiMatrix, coincidence_matrix, disjoint_pi, pi_to_sigma, sigma_to_pi
from .oracle import monte_carlo_p
from .sampling import check_seed
from .verify import all_passed, run_checks

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2, 3
CI_ENV = "SPERMAT_CI"

log = logging.getLogger("spermat")


class UsageError(Exception):
    pass


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return check_seed(args.seed)
    if os.environ.get(CI_ENV):
        raise UsageError(f"{CI_ENV} is set: randomized commands need an explicit --seed")
    seed = secrets.randbits(63)
    print(f"# no --seed given, using {seed}", file=sys.stderr)
    return seed


def _class_line(c) -> str:
    psi = ",".join(map(str, c.psi))
    return f"k={c.k} orbit_size={c.orbit_size} psi=<{psi}> weight={c.weight} canonical={'|'.join(c.canonical.to_strings())}"


def cmd_classes(args) -> int:
    table = load_class_table(args.n, force=args.force, jobs=args.jobs, allow_large=args.allow_large)
    N = args.n * args.n
    sums = table.orbit_sums()
    binoms = [math.comb(N, k) for k in range(N + 1)]
    summary = [
        f"n={args.n}: {len(table.classes)} classes",
        "classes per k: " + ",".join(map(str, table.class_counts())),
        f"k-sums: {','.join(map(str, sums))} {'=' if sums == binoms else '!='} C({N},k)",
    ]
    shown = table
    if args.k is not None:
        shown = ClassTable(table.n, tuple(table.by_k(args.k)), table.metadata)
    if args.format == "json":
        data = shown.to_json()
    elif args.format == "csv":
        data = shown.to_csv()
    else:
        data = "\n".join(_class_line(c) for c in shown.classes) + "\n"

    if args.output or args.format == "text":
        print("\n".join(summary))
        _emit(data, args.output)
    else:
        print("\n".join(summary), file=sys.stderr)
        _emit(data, None)
    return EXIT_OK if sums == binoms else EXIT_MISMATCH


def cmd_count(args) -> int:
    report = full_report(args.n, force=args.force, jobs=args.jobs, allow_large=args.allow_large)
    if args.format == "json":
        _emit(json.dumps(report.to_dict(args.places), indent=1) + "\n", args.output)
        return EXIT_OK
    if report.p is None:
        p_text = f"p=undefined ({UndefinedForN1()})"
    else:
        p_text = f"p={report.p.numerator}/{report.p.denominator} ≈ {render_decimal(report.p, args.places)}"
    lines = [f"xi={report.xi} eta={report.eta} {p_text}"]
    ks = range(len(report.q)) if args.k is None else [args.k]
    for k in ks:
        if not 0 <= k < len(report.q):
            raise UsageError(f"--k must lie in 0..{len(report.q) - 1}")
        lines.append(f"q({args.n},{k})={report.q[k]}")
    print(lines[0])
    if args.output:
        Path(args.output).write_text(json.dumps(report.to_dict(args.places), indent=1) + "\n")
    if args.k is not None or args.format == "text":
        print("\n".join(lines[1:]))
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = _resolve_seed(args)
    report, checks = run_checks(args.n, seed, trials=args.trials, jobs=args.jobs,
                                allow_large=args.allow_large, force=args.force)
    for c in checks:
        print(c.line())
    ok = all_passed(checks)
    print(f"verify n={args.n}: {'all checks passed' if ok else 'MISMATCH'}")
    if args.output:
        payload = {"n": args.n, "seed": seed, "ok": ok, "checks": [c.to_dict() for c in checks]}
        Path(args.output).write_text(json.dumps(payload, indent=1) + "\n")
    return EXIT_OK if ok else EXIT_MISMATCH


def _read(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return read_matrix(text)


def _as_pi(m) -> PiMatrix:
    return m if isinstance(m, PiMatrix) else sigma_to_pi(m)


def cmd_convert(args) -> int:
    if args.check_disjoint:
        a, b = (_as_pi(_read(p)) for p in args.check_disjoint)
        if disjoint_pi(a, b):
            print("disjoint")
        else:
            cm = coincidence_matrix(a, b)
            where = ",".join(f"({i},{j})" for i, j in cm.ones())
            print(f"NOT disjoint; coincidences at {where}")
            print(cm)
        return EXIT_OK
    if not args.input:
        raise UsageError("convert needs an input file or --check-disjoint A B")
    m = _read(args.input)
    if isinstance(m, PiMatrix):
        _emit(format_sperm_text(pi_to_sigma(m)), args.output)
    else:
        _emit(json.dumps(pi_to_json(sigma_to_pi(m))) + "\n", args.output)
    return EXIT_OK


def cmd_sample(args) -> int:
    seed = _resolve_seed(args)
    trials = args.trials or 100_000
    result = monte_carlo_p(args.n, trials, seed, jobs=args.jobs)
    if result.estimate is None:
        line = f"n={args.n} trials={trials} seed={seed}: every pair drawn was equal; no estimate"
    else:
        err = "undefined" if result.stderr is None else f"{result.stderr:.6f}"
        line = (f"n={args.n} trials={trials} seed={seed} estimate={result.estimate:.6f} "
                f"stderr={err} equal_pairs={result.equal_pairs}")
    print(line)
    payload = result.to_dict()
    try:
        report = full_report(args.n, jobs=args.jobs)
    except InfeasibleSize:
        report = None
    if report is not None and report.p is not None:
        target = float(report.p)
        payload["formula_p"] = render_decimal(report.p, 6)
        if result.stderr is not None:
            z = (result.estimate - target) / result.stderr
            payload["z"] = z
            print(f"formula p={render_decimal(report.p, 6)} z={z:+.2f}")
    if args.output:
        Path(args.output).write_text(json.dumps(payload, indent=1) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spermat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"spermat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("text", "json")):
        p.add_argument("-n", type=int, required=True, help="block size (matrices are n^2 x n^2)")
        p.add_argument("--output", "-o", help="write results to this file")
        p.add_argument("--format", choices=formats, default=formats[0])
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
        p.add_argument("--force", action="store_true", help="regenerate cached class tables")
        p.add_argument("--allow-large", action="store_true", help="lift the default size limits")

    p = sub.add_parser("classes", help="enumerate row/column permutation classes of n x n binary matrices")
    common(p, ("text", "json", "csv"))
    p.add_argument("--k", type=int, help="only list classes with this many ones")
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("count", help="exact xi, eta and p from the class table")
    common(p)
    p.add_argument("--k", type=int, help="print q(n,k) for this k")
    p.add_argument("--places", type=int, default=6, help="decimal places for p")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", help="check the formula against brute-force oracles")
    common(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, help="Monte Carlo trials (always run for n >= 4)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("convert", help="convert between S-permutation text and pair-matrix JSON")
    p.add_argument("input", nargs="?")
    p.add_argument("--output", "-o")
    p.add_argument("--check-disjoint", nargs=2, metavar=("A", "B"))
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("sample", help="Monte Carlo estimate of p(n)")
    common(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, default=100_000)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    n = getattr(args, "n", None)
    if n is not None and n < 1:
        print("error: -n must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "trials", None) is not None and args.trials < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InfeasibleSize as exc:
        print(f"error: InfeasibleSize: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (SpermatError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
