"""Command-line front end: solve problems, run refinement studies, emit tables.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from slfem.analysis import DEFAULT_NORM_ORDER, DEFAULT_SUBDIVISIONS, RefinementReport, refinement_study
from slfem.assembly import DEFAULT_ASSEMBLY_ORDER
from slfem.errors import NumericalError
from slfem.problem import CATALOG
from slfem.solve import METHODS


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; remap to the documented code 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _fmt_error(value: float) -> str:
    return f"{value:.4E}"


def _fmt_order(value) -> str:
    return "" if value is None else f"{value:.2f}"


def report_to_csv(report: RefinementReport) -> str:
    lines = ["N,l2_error,l2_order,h1_error,h1_order"]
    for row in report.rows:
        lines.append(
            f"{row.n},{_fmt_error(row.l2_error)},{_fmt_order(row.l2_order)},"
            f"{_fmt_error(row.h1_error)},{_fmt_order(row.h1_order)}"
        )
    return "\n".join(lines) + "\n"


def report_to_markdown(report: RefinementReport) -> str:
    lines = [
        f"Grid refinement: {report.problem}, method {report.method}"
        f" (norm quadrature order {report.norm_quad_order})",
        "",
        "| N | l2_error | l2_order | h1_error | h1_order |",
        "|---:|---:|---:|---:|---:|",
    ]
    for row in report.rows:
        lines.append(
            f"| {row.n} | {_fmt_error(row.l2_error)} | {_fmt_order(row.l2_order)} |"
            f" {_fmt_error(row.h1_error)} | {_fmt_order(row.h1_order)} |"
        )
    return "\n".join(lines) + "\n"


def _add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", choices=sorted(CATALOG), default="poisson")
    p.add_argument("--k1-pi", type=float, default=None,
                   help="oscillation parameter k1 as a multiple of pi (default 5)")
    p.add_argument("--k2-pi", type=float, default=None,
                   help="oscillation parameter k2 as a multiple of pi (default 0)")
    p.add_argument("--k1", type=float, default=None, help="raw k1 value")
    p.add_argument("--k2", type=float, default=None, help="raw k2 value")
    p.add_argument("--method", choices=sorted(METHODS), default="compact")


def _resolve_k(raw, pi_mult, default_pi_mult, name, parser):
    if raw is not None and pi_mult is not None:
        parser.error(f"give either --{name} or --{name}-pi, not both")
    if raw is not None:
        return raw
    return (pi_mult if pi_mult is not None else default_pi_mult) * np.pi


def _build_problem(args, parser):
    k1 = _resolve_k(args.k1, args.k1_pi, 5.0, "k1", parser)
    k2 = _resolve_k(args.k2, args.k2_pi, 0.0, "k2", parser)
    if args.problem == "poisson" and k2 != 0.0:
        parser.error("the poisson problem takes only k1")
    return CATALOG[args.problem].build(k1, k2)


def _parse_levels(text: str, parser) -> list[int]:
    try:
        levels = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        parser.error(f"bad level list {text!r}")
    if not levels or any(b <= a for a, b in zip(levels, levels[1:])):
        parser.error("levels must be a nonempty, strictly increasing comma list")
    return levels


def _emit(text: str, out: str | None) -> None:
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text)


def cmd_study(args, parser) -> int:
    problem = _build_problem(args, parser)
    levels = _parse_levels(args.levels, parser)
    report = refinement_study(
        problem, args.method, levels,
        quad_order=args.quad, norm_quad_order=args.norm_quad,
        subdivisions=args.subdivisions,
    )
    text = report_to_csv(report) if args.format == "csv" else report_to_markdown(report)
    _emit(text, args.out)
    return 0


def cmd_solve(args, parser) -> int:
    problem = _build_problem(args, parser)
    if args.samples < 2:
        parser.error("--samples must be at least 2")
    solution = METHODS[args.method](problem, args.n, quad_order=args.quad)
    xs = np.linspace(*problem.domain, args.samples)
    uh = solution.evaluate(xs)
    duh = solution.derivative(xs)
    exact = problem.exact
    u = exact.sample(xs) if exact is not None else None
    du = exact.sample_deriv(xs, domain=problem.domain) if exact is not None else None

    lines = ["x,uh,duh,u,du"]
    for i, x in enumerate(xs):
        ucol = f"{u[i]:.10E}" if u is not None else ""
        dcol = f"{du[i]:.10E}" if du is not None else ""
        lines.append(f"{x:.10E},{uh[i]:.10E},{duh[i]:.10E},{ucol},{dcol}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_list(args, parser) -> int:
    for entry in CATALOG.values():
        print(f"{entry.name:10s} {entry.summary}")
        print(f"{'':10s} {entry.reference}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slfem",
                     description="1D Sturm-Liouville finite element solvers and refinement studies")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p_study = sub.add_parser("study", help="run a grid-refinement study")
    _add_problem_args(p_study)
    p_study.add_argument("--levels", default="8,16,32,64,128,256,512,1024",
                         help="comma list of element counts")
    p_study.add_argument("--quad", type=int, default=DEFAULT_ASSEMBLY_ORDER,
                         help="assembly quadrature order")
    p_study.add_argument("--norm-quad", type=int, default=DEFAULT_NORM_ORDER,
                         help="error-norm quadrature order")
    p_study.add_argument("--subdivisions", type=int, default=DEFAULT_SUBDIVISIONS,
                         help="norm sub-intervals per element")
    p_study.add_argument("--format", choices=("csv", "md"), default="csv")
    p_study.add_argument("--out", default=None, help="also write the table to this path")
    p_study.set_defaults(func=cmd_study)

    p_solve = sub.add_parser("solve", help="solve one problem and sample the solution")
    _add_problem_args(p_solve)
    p_solve.add_argument("--n", type=int, default=32, help="number of elements")
    p_solve.add_argument("--samples", type=int, default=101,
                         help="number of uniformly spaced sample points")
    p_solve.add_argument("--quad", type=int, default=DEFAULT_ASSEMBLY_ORDER)
    p_solve.add_argument("--out", default=None, help="write the CSV to this path")
    p_solve.set_defaults(func=cmd_solve)

    p_list = sub.add_parser("list", help="list the built-in problems")
    p_list.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help exits 0, usage errors exit 1
        return exc.code if isinstance(exc.code, int) else 1
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args, parser)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except NumericalError as exc:
        print(f"slfem: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"slfem: error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())
