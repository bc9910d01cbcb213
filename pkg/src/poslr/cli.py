"""Command-line entry point: ``poslr run | audit | oracle | sweep``."""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .conditioning import bbrcnp_audit, conditioning_report, restricted_condition_number
from .config import ExperimentConfig, load_config, parse_checkpoints
from .errors import ConfigError, PoslrError
from .experiment import execute
from .fileio import jsonable, read_stream, write_json, write_table
from .sparse_oracle import best_subset
from .supermodular import BatchSetFunction, greedy_bound_audit, weak_supermodularity_audit

log = logging.getLogger("poslr")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def _override(exp: ExperimentConfig, args) -> ExperimentConfig:
    problem = exp.problem if args.seed is None else exp.problem.replace(seed=args.seed)
    checkpoints = exp.checkpoints if args.checkpoints is None else parse_checkpoints(args.checkpoints)
    return ExperimentConfig(problem, exp.algorithm, checkpoints, exp.out_dir)


def _emit(obj) -> None:
    print(json.dumps(jsonable(obj), indent=2, sort_keys=True))


def cmd_run(args) -> int:
    exp = _override(load_config(args.config), args)
    out = args.out or exp.out_dir
    if out is None:
        raise ConfigError("no output directory: pass --out or set out_dir")
    result = execute(exp, out)
    s = result.summary
    _emit({"out": out, "regret": s["regret"], "cum_loss": s["cum_loss"],
           "comparator_loss": s["comparator_loss"], "slope": s["slope"]})
    return EXIT_OK


def cmd_sweep(args) -> int:
    exp = load_config(args.config)
    if args.checkpoints is not None:
        exp = ExperimentConfig(exp.problem, exp.algorithm, parse_checkpoints(args.checkpoints), exp.out_dir)
    try:
        seeds = [int(s) for s in args.seeds.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"--seeds must be a list of integers, got {args.seeds!r}") from None
    out = Path(args.out or exp.out_dir or "sweep")
    rows = []
    for seed in seeds:
        run = ExperimentConfig(exp.problem.replace(seed=seed), exp.algorithm, exp.checkpoints, exp.out_dir)
        res = execute(run, out / f"seed_{seed}")
        slope = res.summary["slope"].get("slope", math.nan)
        rows.append([seed, res.summary["cum_loss"], res.summary["comparator_loss"],
                     res.summary["regret"], float(slope)])
    write_table(out / "sweep.csv", ["seed", "cum_loss", "comparator_loss", "regret", "slope"], rows)
    regrets = np.array([r[3] for r in rows])
    slopes = np.array([r[4] for r in rows])
    agg = {"config": exp.echo(), "seeds": seeds,
           "median_regret": float(np.median(regrets)), "mean_regret": float(np.mean(regrets)),
           "median_slope": float(np.nanmedian(slopes)) if np.isfinite(slopes).any() else None}
    write_json(out / "sweep.json", agg)
    _emit(agg)
    return EXIT_OK


def cmd_audit(args) -> int:
    stream = read_stream(args.data)
    X = stream.X
    cond = conditioning_report(X, args.k)
    report = {"conditioning": cond.to_dict()}
    if args.t0 is not None:
        bound = args.kappa_bound if args.kappa_bound is not None else cond.kappa
        report["bbrcnp"] = bbrcnp_audit(X, args.k, args.t0, bound, args.window_policy, args.batch).to_dict()
    batch = args.batch or len(stream)
    batches = []
    for start in range(0, len(stream), batch):
        Xb = X[start:start + batch]
        f = BatchSetFunction(Xb, stream.y[start:start + batch])
        # default alpha: the batch's own restricted condition number, squared
        alpha = args.alpha if args.alpha is not None else restricted_condition_number(Xb, args.k) ** 2
        finite = math.isfinite(alpha)
        ws = weak_supermodularity_audit(f, args.k, alpha) if finite else []
        gb = greedy_bound_audit(f, args.k, alpha) if finite else []
        batches.append({"start": start + 1, "length": f.B, "alpha": alpha if finite else "inf",
                        "weak_supermodularity_violations": len(ws), "greedy_violations": len(gb)})
    report["supermodularity"] = {"k": args.k, "batches": batches,
                                 "total_violations": sum(b["weak_supermodularity_violations"] + b["greedy_violations"]
                                                         for b in batches)}
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        write_json(Path(args.out) / "audit.json", report)
    _emit(report)
    return EXIT_OK


def cmd_oracle(args) -> int:
    stream = read_stream(args.data)
    fit = best_subset(stream.X, stream.y, args.k, args.cap)
    report = {"k": args.k, "support": [i + 1 for i in fit.support], "w": fit.w,
              "mean_loss": fit.mean_loss, "total_loss": fit.total_loss, "n": fit.n}
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        write_json(Path(args.out) / "oracle.json", report)
    _emit(report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poslr", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one experiment from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int)
    p.add_argument("--checkpoints", help="'dyadic' or a comma-separated list of rounds")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a config template over several seeds")
    p.add_argument("--config", required=True)
    p.add_argument("--seeds", required=True, help="comma-separated seeds")
    p.add_argument("--out")
    p.add_argument("--checkpoints")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("audit", help="conditioning and supermodularity audits of a data file")
    p.add_argument("--data", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t0", type=int, help="minimum block length for the block condition audit")
    p.add_argument("--kappa-bound", type=float)
    p.add_argument("--alpha", type=float, help="weak supermodularity parameter (default: each batch's measured kappa^2)")
    p.add_argument("--batch", type=int, help="batch length for per-batch audits")
    p.add_argument("--window-policy", default="dyadic", choices=["dyadic", "all", "whole"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("oracle", help="exhaustive best k-sparse least-squares fit of a data file")
    p.add_argument("--data", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--cap", type=int, default=2_000_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PoslrError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
