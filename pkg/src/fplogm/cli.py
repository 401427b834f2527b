"""Command-line interface: ``fplogm {logm,bench,region}``.

Exit status: 0 on success, 1 on bad input, 2 when the logarithm iteration
did not converge (the best iterate is still written).
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional

from . import bench as bench_mod
from .dense import read_matrix, write_matrix
from .logm import (
    FixedPointConfig,
    Init,
    LogmDivergenceError,
    SpectralBounds,
    error_estimate,
    fixed_point_logm,
)
from .scalar import region_grid, write_grid_csv

log = logging.getLogger("fplogm")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_CONVERGED = 2


def _float_list(text: str) -> List[float]:
    return [float(x) for x in text.replace(",", " ").split()]


def _int_list(text: str) -> List[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="fplogm", description="Matrix logarithm by fixed-point iteration on exponentials.", formatter_class=fmt)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("logm", help="logarithm of a matrix file", formatter_class=fmt)
    p.add_argument("--input", required=True, help="matrix text file")
    p.add_argument("--output", required=True, help="where to write ln(A)")
    p.add_argument("--report", default=None, help="iteration report file (default: stderr)")
    p.add_argument("--epsilon", type=float, default=1e-10, help="stopping threshold on ||X_n|| ||X_{n+1}-X_n||")
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--init", default="paper", help="paper | linear | file:<path>")
    p.add_argument("--lambda-min", type=float, default=None, help="lower spectral bound for --init linear (default: Gershgorin)")
    p.add_argument("--lambda-max", type=float, default=None, help="upper spectral bound for --init linear (default: Gershgorin)")
    p.add_argument("--sigma", type=float, default=1.0, help="iterate on A/sigma and add ln(sigma)")
    p.add_argument("--refine", action="store_true", help="apply one refinement step at the end")

    b = sub.add_parser("bench", help="run the random-matrix benchmark", formatter_class=fmt)
    b.add_argument("--dims", type=_int_list, default=[4, 8, 16], help="comma-separated matrix sizes")
    b.add_argument("--samples", type=int, default=100, help="matrices per size (1000 for a full-size run)")
    b.add_argument("--dist", choices=["uniform", "exponential"], default="uniform")
    b.add_argument("--rate", type=float, default=10.0, help="rate of the exponential eigenvalue law")
    b.add_argument("--eps-list", type=_float_list, default=[1e-2, 1e-4, 1e-6, 1e-8, 1e-10], help="comma-separated thresholds")
    b.add_argument("--seed", type=int, default=0, help="master seed")
    b.add_argument("--refine", action="store_true", help="also record the error after one refinement step")
    b.add_argument("--records", default="records.csv")
    b.add_argument("--summary", default="summary.csv")

    r = sub.add_parser("region", help="sample the convergence indicator on a grid", formatter_class=fmt)
    r.add_argument("--re-min", type=float, default=-math.pi)
    r.add_argument("--re-max", type=float, default=math.pi)
    r.add_argument("--im-min", type=float, default=-math.pi)
    r.add_argument("--im-max", type=float, default=math.pi)
    r.add_argument("--resolution", type=int, default=201, help="points per axis")
    r.add_argument("--out", default="region.csv")
    return parser


def _config_from_args(args) -> FixedPointConfig:
    kw = dict(eps=args.epsilon, max_iter=args.max_iter, sigma=args.sigma, refine=args.refine)
    if args.init == "paper":
        kw["init"] = Init.PAPER
    elif args.init == "linear":
        kw["init"] = Init.LINEAR
        if (args.lambda_min is None) != (args.lambda_max is None):
            raise ValueError("--lambda-min and --lambda-max must be given together")
        if args.lambda_min is not None:
            kw["bounds"] = SpectralBounds(args.lambda_min, args.lambda_max)
    elif args.init.startswith("file:"):
        kw["init"] = Init.USER
        kw["x0"] = read_matrix(args.init[len("file:"):])
    else:
        raise ValueError(f"unknown --init {args.init!r}")
    return FixedPointConfig(**kw)


def cmd_logm(args) -> int:
    try:
        a = read_matrix(args.input)
        config = _config_from_args(args)
    except (OSError, ValueError) as exc:
        print(f"fplogm logm: {exc}", file=sys.stderr)
        return EXIT_INPUT

    diverged = None
    try:
        result = fixed_point_logm(a, config)
    except LogmDivergenceError as exc:
        diverged = str(exc)
        result = exc.result
    except ArithmeticError as exc:
        print(f"fplogm logm: {exc}", file=sys.stderr)
        return EXIT_INPUT

    rep = result.report
    err = error_estimate(a, result.x)
    write_matrix(args.output, result.x, comment=f"logarithm of {args.input}")
    lines = [
        f"converged: {rep.converged}",
        f"iterations: {rep.iterations}",
        f"stop_value: {rep.stop_value:.6e}",
        f"fixed_point_muls: {rep.ledger.fixed_point_muls}",
        f"exp_muls: {rep.ledger.exp_muls}",
        f"total_muls: {rep.ledger.total}",
        f"refinement_applied: {rep.refinement_applied}",
        f"inverse_residual: {rep.inverse_residual:.6e}",
        f"error_estimate: {err:.6e}",
    ]
    if diverged:
        lines.append(f"diverged: {diverged}")
    text = "\n".join(lines) + "\n"
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stderr.write(text)
    return EXIT_OK if rep.converged else EXIT_NOT_CONVERGED


def cmd_bench(args) -> int:
    try:
        dist = bench_mod.EigenvalueDistribution(args.dist, rate=args.rate)
        config = bench_mod.BenchConfig(
            dims=args.dims,
            samples=args.samples,
            eps_values=args.eps_list,
            distribution=dist,
            master_seed=args.seed,
            refine=args.refine,
        )
    except ValueError as exc:
        print(f"fplogm bench: {exc}", file=sys.stderr)
        return EXIT_INPUT
    records, summary = bench_mod.run_experiment(config)
    bench_mod.write_records_csv(records, args.records)
    bench_mod.write_summary_csv(summary, args.summary)
    log.info("wrote %d records to %s", len(records), args.records)
    return EXIT_OK


def cmd_region(args) -> int:
    try:
        grid = region_grid((args.re_min, args.re_max), (args.im_min, args.im_max), args.resolution)
    except ValueError as exc:
        print(f"fplogm region: {exc}", file=sys.stderr)
        return EXIT_INPUT
    write_grid_csv(grid, args.out)
    return EXIT_OK


COMMANDS = {"logm": cmd_logm, "bench": cmd_bench, "region": cmd_region}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which would collide with "not converged"
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
