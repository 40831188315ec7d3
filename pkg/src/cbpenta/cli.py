"""Command-line interface.

Exit codes: 0 ok, 2 usage or parse error, 3 singular factorization,
4 I/O error, 5 verification failure.
"""

import argparse
import sys

import numpy as np

from . import __version__
from ._compat import BACKEND
from .exceptions import FormatError, SingularSystemError
from .matrix import (
    BlockPentaCyclic, read_system, residual_inf, to_dense, write_solution, write_system,
)
from .oracle import dense_solve
from .problems import gen_random, generate, run_experiment, worked_example
from .solver import SolverParams, factorize, solve, solve_in_place

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SINGULAR = 3
EXIT_IO = 4
EXIT_VERIFY = 5

TSV_HEADER = "n\tm\terr\tres\tavg_err\tfactor_s\tsolve_s"
VERIFY_TOL = 1e-9

DEFAULT_SIZES = {
    "random": [1000, 10000],
    "circulant": [500, 1000, 2000, 4000, 8000],
    "bvp": [20, 40, 80, 160, 320, 640],
}


def _int_list(text):
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _add_param_flags(parser):
    group = parser.add_argument_group("auxiliary parameters")
    group.add_argument("--alpha", type=float, default=1.0)
    group.add_argument("--beta", type=float, default=-1.0)
    group.add_argument("--gamma", type=float, default=1.0)
    group.add_argument("--delta", type=float, default=-1.0)


def _params(args):
    return SolverParams(args.alpha, args.beta, args.gamma, args.delta)


def _fail(code, message):
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_solve(args):
    try:
        with open(args.system, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot read {args.system}: {exc}")
    try:
        mat, f = read_system(text)
    except (FormatError, ValueError) as exc:
        return _fail(EXIT_USAGE, f"{args.system}: {exc}")
    exact = np.ones_like(f) if args.exact == "ones" else None
    try:
        params = _params(args)
        if args.in_place:
            report = solve_in_place(mat.copy(), f.copy(), params, exact=exact)
            # the in-place path consumes its copy; residual uses the original
            report.res = residual_inf(mat, report.x, f)
        else:
            report = solve(factorize(mat, params), f, exact=exact)
    except SingularSystemError as exc:
        return _fail(EXIT_SINGULAR, str(exc))
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    try:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(write_solution(report.x))
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write {args.output}: {exc}")
    print(f"res={report.res:.17g}")
    if report.err is not None:
        print(f"err={report.err:.17g}")
    return EXIT_OK


def format_row(row, timings=True):
    if timings:
        times = f"{row.factor_seconds:.6f}\t{row.solve_seconds:.6f}"
    else:
        times = "-\t-"
    return f"{row.n}\t{row.m}\t{row.err:.4e}\t{row.res:.4e}\t{row.avg_err:.4e}\t{times}"


def cmd_bench(args):
    sizes = args.sizes or DEFAULT_SIZES[args.example]
    try:
        params = _params(args)
        rows = [
            run_experiment(args.example, n, m=args.m, seed=args.seed, shift=args.shift,
                           params=params)
            for n in sizes
        ]
    except SingularSystemError as exc:
        return _fail(EXIT_SINGULAR, str(exc))
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    print(TSV_HEADER)
    for row in rows:
        print(format_row(row, timings=not args.no_timings))
    return EXIT_OK


def _identity_system(m, n):
    zero = np.zeros((m, m))
    return BlockPentaCyclic.constant(n, zero, zero, np.eye(m), zero, zero)


def _discrepancy(mat, f, params):
    x = solve(factorize(mat, params), f).x.ravel()
    ref = dense_solve(to_dense(mat), f.ravel())
    scale = np.max(np.abs(ref))
    diff = np.max(np.abs(x - ref))
    return diff / scale if scale > 0 else diff


def cmd_verify(args):
    try:
        params = _params(args)
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    failures = []
    print("m\tn\ttrials\tmax_rel_diff")
    try:
        if args.self_test:
            # known-singular choice: lambda = -3 on the worked example
            mat, f, _ = worked_example()
            factorize(mat, (1.0, -3.0, 1.0, 1.0))
        for m in args.m:
            for n in args.n:
                if n * m > 4096:
                    return _fail(EXIT_USAGE, f"n*m = {n * m} exceeds the dense guard")
                rng = np.random.default_rng([args.seed, m, n])
                worst = _discrepancy(_identity_system(m, n), rng.random((n, m)), params)
                for trial in range(args.trials):
                    mat, f, _ = gen_random(m, n, seed=[args.seed, m, n, trial])
                    d = _discrepancy(mat, f, params)
                    worst = max(worst, d)
                    if not d <= VERIFY_TOL:
                        failures.append((m, n, trial, d))
                print(f"{m}\t{n}\t{args.trials}\t{worst:.3e}")
    except SingularSystemError as exc:
        return _fail(EXIT_SINGULAR, str(exc))
    if failures:
        for m, n, trial, d in failures:
            print(f"FAIL m={m} n={n} trial={trial} seed=[{args.seed}, {m}, {n}, {trial}] "
                  f"rel_diff={d:.3e}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_generate(args):
    try:
        if args.example == "worked":
            mat, f, _ = worked_example()
        else:
            mat, f, _ = generate(args.example, args.n, m=args.m, seed=args.seed,
                                 shift=args.shift)
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    try:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(write_system(mat, f))
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write {args.output}: {exc}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cbpenta", description="Cyclic block penta-diagonal linear system solver."
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} ({BACKEND} backend)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a system file")
    p.add_argument("system")
    p.add_argument("-o", "--output", required=True, help="solution file to write")
    p.add_argument("--exact", choices=["ones"], help="report err against a known solution")
    p.add_argument("--in-place", action="store_true", help="use the single-RHS in-place path")
    _add_param_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run one of the numerical experiments")
    p.add_argument("example", choices=["random", "circulant", "bvp"])
    p.add_argument("--sizes", type=_int_list, help="comma-separated block-row counts")
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shift", type=float, help="diagonal shift for random systems (default 4m)")
    p.add_argument("--no-timings", action="store_true", help="print '-' in the timing columns")
    _add_param_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="compare the solver with the dense oracle")
    p.add_argument("--m", type=_int_list, default=[1, 2, 4])
    p.add_argument("--n", type=_int_list, default=[5, 8, 12])
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--self-test", action="store_true",
                   help="first solve a known-singular configuration (exits 3)")
    _add_param_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write an example system file")
    p.add_argument("example", choices=["worked", "random", "circulant", "bvp"])
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shift", type=float)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
