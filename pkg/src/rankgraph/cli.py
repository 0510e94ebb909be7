"""Command-line interface: two-sample tests, estimation, and simulations.

Results go to stdout (or the requested output file); diagnostics and progress
go to stderr. Exit codes: 0 on completion, 2 on input/parameter problems,
3 when a calibration scheme is not applicable to the given samples.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
from dataclasses import replace

import jsonschema
import numpy as np

from . import __version__
from .config import load_run_config, rank_selection_from_option
from .errors import (
    CalibrationError,
    EstimationError,
    InputError,
    ParameterError,
)
from .estimator import (
    DEFAULT_C0,
    EstimatorConfig,
    average_adjacency,
    discretize,
    estimate_details,
)
from .graphio import read_graph, write_prob_matrix
from .harness import run_experiment
from .resampling import TestReport, bootstrap_test, permutation_test

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CALIBRATION = 3


def _parse_eta(value: str):
    if value.lower() in ("none", ""):
        return None
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--eta must be a real number or 'none', got {value!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankgraph",
        description=(
            "Two-sample testing for latent distance random graphs via "
            "spectral edge-probability estimates and Spearman rank correlation."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    test = sub.add_parser("test", help="run a two-sample test on graph files")
    test.add_argument("--a", nargs="+", required=True, metavar="FILE",
                      help="graph files for sample A (edgelist or dense 0/1)")
    test.add_argument("--b", nargs="+", required=True, metavar="FILE",
                      help="graph files for sample B")
    test.add_argument("--method", choices=("permutation", "bootstrap"), required=True,
                      help="calibration scheme (permutation needs >= 2 graphs per side)")
    _add_estimator_options(test)
    test.add_argument("--reps", type=int, default=1000, metavar="N",
                      help="resampling replications (default 1000)")
    test.add_argument("--alpha", type=float, default=0.05,
                      help="significance level for the printed decision (default 0.05)")
    test.add_argument("--report", default="report.json", metavar="PATH",
                      help="where to write the JSON report (default report.json)")
    _add_common_options(test)

    est = sub.add_parser("estimate", help="estimate edge probabilities from graphs")
    est.add_argument("--a", nargs="+", required=True, metavar="FILE",
                     help="graph files to average and estimate from")
    _add_estimator_options(est)
    est.add_argument("--out", required=True, metavar="PATH",
                     help="output file for the dense real-valued matrix")
    _add_common_options(est)

    sim = sub.add_parser("simulate", help="run a power experiment from a JSON config")
    sim.add_argument("--config", required=True, metavar="RUN.JSON")
    sim.add_argument("--out", required=True, metavar="TABLE.CSV")
    _add_common_options(sim)
    return parser


def _add_estimator_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--k", default="auto-profile", metavar="K",
                     help="truncation rank: integer, 'auto-threshold' or "
                          "'auto-profile' (default auto-profile)")
    sub.add_argument("--c0", type=float, default=DEFAULT_C0,
                     help=f"constant for --k auto-threshold (default {DEFAULT_C0})")
    sub.add_argument("--max-rank", type=int, default=None,
                     help="scree length for --k auto-profile (default min(n-1, 50))")
    sub.add_argument("--eta", type=_parse_eta, default=None, metavar="ETA",
                     help="discretization step in (0, 1], or 'none' (default none)")


def _add_common_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=None,
                     help="master seed; omitted: drawn from system entropy and printed")
    sub.add_argument("--threads", type=int, default=None, metavar="T",
                     help="worker processes for simulation trials "
                          "(default: hardware parallelism; outputs do not depend on T)")


def _resolve_seed(args) -> int:
    if args.seed is not None:
        if args.seed < 0:
            raise ParameterError(f"--seed must be >= 0, got {args.seed}")
        return args.seed
    seed = secrets.randbits(63)
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def _estimator_config(args) -> EstimatorConfig:
    rank = rank_selection_from_option(args.k, c0=args.c0, max_rank=args.max_rank)
    return EstimatorConfig(rank=rank, eta=args.eta)


def _load_graphs(paths) -> list:
    graphs = [read_graph(p) for p in paths]
    n = graphs[0].n
    for path, g in zip(paths, graphs):
        if g.n != n:
            raise InputError(f"{path}: has n={g.n}, but earlier files have n={n}")
    return graphs


def _summary(values: np.ndarray) -> dict:
    qs = np.quantile(values, [0.05, 0.25, 0.5, 0.75, 0.95]) if values.size else [0] * 5
    return {
        "count": int(values.size),
        "min": float(values.min()) if values.size else None,
        "q05": float(qs[0]),
        "q25": float(qs[1]),
        "q50": float(qs[2]),
        "q75": float(qs[3]),
        "q95": float(qs[4]),
        "max": float(values.max()) if values.size else None,
        "mean": float(values.mean()) if values.size else None,
    }


def _report_json(report: TestReport, alpha: float) -> dict:
    return {
        "schema_version": 1,
        "t": report.t_observed,
        "p_value": report.p_value,
        "method": report.method,
        "n": report.n,
        "k_a": report.k_a,
        "k_b": report.k_b,
        "n_reps": report.n_reps,
        "seed": report.seed,
        "alpha": alpha,
        "reject": report.p_value < alpha,
        "settings": report.settings,
        "null_samples": {key: _summary(vals) for key, vals in report.null_samples.items()},
        "degenerate_observed": report.degenerate_observed,
        "n_degenerate": report.n_degenerate,
    }


def _cmd_test(args) -> int:
    seed = _resolve_seed(args)
    cfg = _estimator_config(args)
    graphs_a = _load_graphs(args.a)
    graphs_b = _load_graphs(args.b)
    if graphs_a[0].n != graphs_b[0].n:
        raise InputError(f"samples have different n: {graphs_a[0].n} vs {graphs_b[0].n}")
    if args.method == "permutation":
        report = permutation_test(graphs_a, graphs_b, cfg, args.reps, seed)
    else:
        report = bootstrap_test(graphs_a, graphs_b, cfg, args.reps, seed)

    decision = "reject H0" if report.p_value < args.alpha else "do not reject H0"
    print("two-sample rank test")
    print(f"  method      {report.method}")
    print(f"  samples     {len(graphs_a)} vs {len(graphs_b)} graphs, n = {report.n}")
    print(f"  rank K      {report.k_a} (A), {report.k_b} (B)")
    print(f"  statistic   t = {report.t_observed:.6f}"
          + ("  [degenerate]" if report.degenerate_observed else ""))
    print(f"  p-value     {report.p_value:.6g}  ({report.n_reps} replications)")
    print(f"  decision    {decision} at alpha = {args.alpha:g}")
    with open(args.report, "w") as fh:
        json.dump(_report_json(report, args.alpha), fh, indent=2)
        fh.write("\n")
    print(f"  report      {args.report}")
    return EXIT_OK


def _cmd_estimate(args) -> int:
    cfg = _estimator_config(args)
    graphs = _load_graphs(args.a)
    result = estimate_details(average_adjacency(graphs), cfg)
    phat = result.phat
    if cfg.eta is not None:
        phat = discretize(phat, cfg.eta)
    write_prob_matrix(phat, args.out)
    print(f"K = {result.k}", file=sys.stderr)
    print(f"rho_hat = {result.rho_hat:.6g}", file=sys.stderr)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    loaded = load_run_config(args.config)
    spec = loaded.spec
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    elif not loaded.seed_given:
        seed = secrets.randbits(63)
        print(f"seed: {seed}", file=sys.stderr)
        spec = replace(spec, seed=seed)
    threads = args.threads if args.threads is not None else loaded.threads
    if threads is None or threads < 1:
        threads = os.cpu_count() or 1
    table = run_experiment(spec, workers=threads)
    table.write_csv(args.out)
    for cell in table.cells:
        if cell.error is not None:
            print(f"cell (n={cell.n}, eps={cell.eps:g}) failed: {cell.error}", file=sys.stderr)
        else:
            print(
                f"cell (n={cell.n}, eps={cell.eps:g}): power={cell.power:.3f} "
                f"mean_t={cell.mean_t:.4f} [{cell.wall_s:.1f}s]",
                file=sys.stderr,
            )
    print(f"wrote {args.out}", file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "test":
            return _cmd_test(args)
        if args.command == "estimate":
            return _cmd_estimate(args)
        return _cmd_simulate(args)
    except CalibrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CALIBRATION
    except jsonschema.ValidationError as exc:
        print(f"error: config invalid at {exc.json_path}: {exc.message}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, ParameterError, EstimationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
