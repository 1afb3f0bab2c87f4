"""Command-line interface.

Every computation and experiment is reachable through a subcommand; output
is CSV by default or JSON with ``--format json``.  Scalar results print as
a bare decimal in shortest round-trip form.  Exit codes: 0 on success, 2 on
usage errors (message on stderr), 1 on domain or resource errors with a
single line ``error: <code>: <message>`` on stderr.  All randomness flows
through explicit seeds; nothing reads the clock.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import numpy as np

from .copulas import parse_copula
from .errors import (
    DegenerateVarianceError,
    DomainError,
    NonDifferentiableError,
    QuadratureError,
    RankRuleError,
    ResourceLimitError,
)
from .harness import ExperimentConfig, run_bound_experiment, run_convergence_experiment
from .limits import limit_joint_cdf, parse_case
from .orderstats import (
    OrderStatSpec,
    joint_cdf,
    joint_cdf_bruteforce,
    conditional_cdf,
    marginal_cdf,
    marginal_density,
)
from . import discrete

_HANDLED_ERRORS = (
    DomainError,
    NonDifferentiableError,
    DegenerateVarianceError,
    RankRuleError,
    ResourceLimitError,
    QuadratureError,
)


def _scalar(value: float) -> str:
    return repr(float(value))


def _scalar_output(args, value: float, numeric_flags: dict) -> str:
    if args.format == "json":
        return json.dumps(
            {"args": numeric_flags, "value": float(value)}, indent=2, sort_keys=True
        )
    return _scalar(value)


def _cmd_copula_eval(args) -> str:
    c = parse_copula(args.copula)
    flags = {"u": args.u, "v": args.v}
    if args.op == "cdf":
        return _scalar_output(args, c.cdf(args.u, args.v), flags)
    if args.op == "partial-v":
        return _scalar_output(args, c.partial_v(args.u, args.v), flags)
    if args.op == "cond-le":
        return _scalar_output(args, c.cond_cdf_given_le(args.u, args.v), flags)
    if args.op == "cond-gt":
        return _scalar_output(args, c.cond_cdf_given_gt(args.u, args.v), flags)
    cells = c.cell_probs(args.u, args.v)
    if args.format == "json":
        payload = {
            "args": flags,
            "p1": cells.p1,
            "p2": cells.p2,
            "p3": cells.p3,
            "p4": cells.p4,
        }
        return json.dumps(payload, indent=2, sort_keys=True)
    values = ",".join(_scalar(p) for p in cells.as_tuple())
    return f"p1,p2,p3,p4\n{values}"


def _cmd_pb_pmf(args) -> str:
    try:
        probs = [float(tok) for tok in args.probs.split(",") if tok.strip()]
    except ValueError:
        raise DomainError(f"invalid probability list {args.probs!r}") from None
    pmf = discrete.poisson_binomial_pmf(probs)
    if args.format == "json":
        return json.dumps(
            {"args": {"probs": probs}, "pmf": [float(w) for w in pmf.weights]},
            indent=2,
            sort_keys=True,
        )
    lines = ["i,p"]
    lines.extend(f"{i},{_scalar(w)}" for i, w in enumerate(pmf.weights))
    return "\n".join(lines)


def _cmd_marginal(args) -> str:
    flags = {"n": args.n, "rank": args.rank, "at": args.at}
    if args.what == "cdf":
        value = marginal_cdf(args.n, args.rank, args.at)
    else:
        value = marginal_density(args.n, args.rank, args.at)
    return _scalar_output(args, value, flags)


def _cmd_joint_cdf(args) -> str:
    c = parse_copula(args.copula)
    spec = OrderStatSpec(n=args.n, m=args.m, k=args.k)
    flags = {"n": args.n, "m": args.m, "k": args.k, "x": args.x, "y": args.y}
    if args.brute:
        value = joint_cdf_bruteforce(c, spec, args.x, args.y)
    else:
        value = joint_cdf(c, spec, args.x, args.y, dp_limit=args.dp_limit)
    return _scalar_output(args, value, flags)


def _cmd_cond_cdf(args) -> str:
    c = parse_copula(args.copula)
    spec = OrderStatSpec(n=args.n, m=args.m, k=args.k)
    flags = {"n": args.n, "m": args.m, "k": args.k, "x": args.x, "y": args.y}
    return _scalar_output(args, conditional_cdf(c, spec, args.x, args.y), flags)


def _cmd_limit_cdf(args) -> str:
    case = parse_case(args.case)
    flags = {"x": args.x, "y": args.y}
    return _scalar_output(args, limit_joint_cdf(case, args.x, args.y), flags)


def _cmd_converge(args) -> str:
    config = ExperimentConfig.from_file(args.config)
    if args.seed is not None:
        config = ExperimentConfig(
            copula=config.copula,
            case=config.case,
            n_list=config.n_list,
            replicates=config.replicates,
            seed=args.seed,
            mode=config.mode,
            grid_u=config.grid_u,
            grid_v=config.grid_v,
        )
    report = run_convergence_experiment(config, dp_limit=args.dp_limit)
    return report.to_json() if args.format == "json" else report.to_csv()


def _cmd_bound(args) -> str:
    try:
        n_list = [int(tok) for tok in args.n_list.split(",") if tok.strip()]
    except ValueError:
        raise DomainError(f"invalid n list {args.n_list!r}") from None
    pairs = []
    for chunk in args.rank_pairs.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 2:
            raise DomainError(f"rank pair {chunk!r} must be <r-rule>,<k-rule>")
        pairs.append((parts[0], parts[1]))
    if not n_list or not pairs:
        raise DomainError("bound experiment needs at least one n and one rank pair")
    grid = None
    if args.grid is not None:
        lo, hi, count = args.grid
        grid = np.linspace(lo, hi, int(count))
    report = run_bound_experiment(
        n_list=n_list, rank_pairs=pairs, grid=grid, dp_limit=args.dp_limit
    )
    return report.to_json() if args.format == "json" else report.to_csv()


def _grid_triple(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid {text!r} must be <lo>:<hi>:<count>")
    try:
        return (float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bivos",
        description="Exact and asymptotic distributions of bivariate order statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("copula-eval", help="evaluate a copula operation at a point")
    p.add_argument("--copula", required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument(
        "--op", choices=("cdf", "partial-v", "cond-le", "cond-gt", "cells"), default="cdf"
    )
    add_format(p)
    p.set_defaults(func=_cmd_copula_eval)

    p = sub.add_parser("pb-pmf", help="Poisson-binomial pmf of a probability vector")
    p.add_argument("--probs", required=True, help="comma-separated success probabilities")
    add_format(p)
    p.set_defaults(func=_cmd_pb_pmf)

    p = sub.add_parser("marginal", help="marginal CDF or density of one order statistic")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--at", type=float, required=True)
    p.add_argument("--what", choices=("cdf", "density"), default="cdf")
    add_format(p)
    p.set_defaults(func=_cmd_marginal)

    p = sub.add_parser("joint-cdf", help="joint CDF of a bivariate order-statistic pair")
    p.add_argument("--copula", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--brute", action="store_true", help="use the multinomial oracle (n <= 12)")
    p.add_argument("--dp-limit", type=int, default=512)
    add_format(p)
    p.set_defaults(func=_cmd_joint_cdf)

    p = sub.add_parser("cond-cdf", help="conditional CDF P(U_{m:n} <= x | V_{k:n} = y)")
    p.add_argument("--copula", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    add_format(p)
    p.set_defaults(func=_cmd_cond_cdf)

    p = sub.add_parser("limit-cdf", help="product limit CDF of a theorem case")
    p.add_argument("--case", required=True, help="e.g. 'case=I; k=sqrt; j=const:2'")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    add_format(p)
    p.set_defaults(func=_cmd_limit_cdf)

    p = sub.add_parser("converge", help="run a convergence experiment from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--dp-limit", type=int, default=512)
    add_format(p)
    p.set_defaults(func=_cmd_converge)

    p = sub.add_parser("bound", help="same-sample independence gap vs the theoretical bound")
    p.add_argument("--n-list", default="20,50,100,200")
    p.add_argument(
        "--rank-pairs",
        default="frac:0.25,sqrt;frac:0.5,sqrt;frac:0.75,sqrt",
        help="semicolon-separated <r-rule>,<k-rule> pairs",
    )
    p.add_argument("--grid", type=_grid_triple, default=None, help="<lo>:<hi>:<count>")
    p.add_argument("--dp-limit", type=int, default=512)
    add_format(p)
    p.set_defaults(func=_cmd_bound)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        output = args.func(args)
    except _HANDLED_ERRORS as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    print(output)
    return 0


def entry() -> None:
    sys.exit(main())
