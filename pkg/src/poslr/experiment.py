"""Experiment orchestration: data, learner, regret ledger, emitted files."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .conditioning import conditioning_report
from .config import ExperimentConfig, load_config
from .core_types import ProblemConfig, RegretLedger, Stream
from .dantzig import run_algorithm1
from .datagen import gen_agnostic, gen_realizable
from .errors import DegenerateFit, EnumerationTooLarge
from .fileio import read_stream, read_table, write_json, write_stream, write_table
from .online_greedy import run_algorithm2
from .regret import compute_regret, dyadic_checkpoints, slope_estimate
from .vaw import VawState, vaw_predict, vaw_update

log = logging.getLogger(__name__)


@dataclass
class Played:
    """Uniform view of any learner's run."""

    plays: np.ndarray
    predictions: np.ndarray
    losses: np.ndarray
    queried: list[np.ndarray]
    details: dict = field(default_factory=dict)


@dataclass
class ExperimentResult:
    config: dict
    checkpoints: list[tuple[int, float, float, float]]
    summary: dict
    files: dict = field(default_factory=dict)
    wall_clock: float = 0.0


def run_zero(stream: Stream) -> Played:
    T, d = stream.X.shape
    return Played(np.zeros((T, d)), np.zeros(T), stream.y ** 2, [np.zeros(0, dtype=np.intp)] * T)


def run_ridge(stream: Stream, reg: float) -> Played:
    """Full-information online ridge (VAW over every coordinate)."""
    T, d = stream.X.shape
    state = VawState(d, reg)
    plays = np.zeros((T, d))
    preds = np.zeros(T)
    for t in range(T):
        y_hat, w = vaw_predict(state, stream.X[t])
        plays[t], preds[t] = w, y_hat
        vaw_update(state, stream.X[t], stream.y[t])
    return Played(plays, preds, (stream.y - preds) ** 2, [np.arange(d)] * T)


def generate(cfg: ProblemConfig):
    if cfg.mode == "realizable":
        stream, truth = gen_realizable(cfg)
        return stream, truth.w_star.w
    return gen_agnostic(cfg), None


def play(algorithm: str, stream: Stream, cfg: ProblemConfig, w_star=None) -> Played:
    if algorithm == "algorithm1":
        tr = run_algorithm1(stream, cfg, w_star=w_star)
        details = {"t0": tr.t0, "solve_rounds": tr.solve_rounds, "lambdas": tr.lambdas,
                   "failed_rounds": [list(f) for f in tr.failed_rounds]}
        if w_star is not None:
            details["estimation_errors"] = tr.estimation_errors
            details["truncated_errors"] = tr.truncated_errors
        return Played(tr.plays, tr.predictions, tr.losses, tr.masks, details)
    if algorithm == "algorithm2":
        tr = run_algorithm2(stream, cfg)
        details = {"B": tr.B, "k1": tr.k1, "budgets": tr.budgets, "batches": len(tr.batches),
                   "clipped_feedback": tr.clipped_feedback}
        return Played(tr.plays, tr.predictions, tr.losses, tr.masks, details)
    if algorithm == "zero":
        return run_zero(stream)
    if algorithm == "ridge":
        return run_ridge(stream, cfg.vaw_reg)
    raise ValueError(f"unknown algorithm {algorithm!r}")


def resolve_checkpoints(points, T: int) -> list[int]:
    if points == "dyadic":
        return dyadic_checkpoints(T)
    pts = sorted(t for t in points if 1 <= t <= T)
    if not pts:
        raise ValueError("no checkpoint inside [1, T]")
    return pts


def _trace_rows(played: Played, stream: Stream):
    for t in range(len(stream)):
        q = played.queried[t]
        support = np.flatnonzero(played.plays[t])
        oslr = np.union1d(q, support)
        yield [t + 1, ";".join(str(int(i) + 1) for i in q), len(q), len(oslr),
               float(stream.y[t]), float(played.predictions[t]), float(played.losses[t])]


TRACE_HEADER = ["t", "queried", "n_queried", "n_queried_oslr", "y", "y_hat", "loss"]
CHECKPOINT_HEADER = ["t", "cum_loss", "comparator_loss", "regret"]


def execute(exp: ExperimentConfig, out_dir=None) -> ExperimentResult:
    """Run one experiment and, if ``out_dir`` is given, write its files there."""
    cfg = exp.problem
    started = time.perf_counter()
    stream, w_star = generate(cfg)
    played = play(exp.algorithm, stream, cfg, w_star)
    cps = resolve_checkpoints(exp.checkpoints, cfg.T)
    ledger = compute_regret(played.losses, stream, cfg.k, cps)

    t_min = cfg.resolved_t0() if exp.algorithm == "algorithm1" else 1
    try:
        fit = slope_estimate(ledger.checkpoints, t_min=t_min)
        slope = {"slope": fit.slope, "r_squared": fit.r_squared, "points": fit.n_points, "t_min": t_min}
    except DegenerateFit as exc:
        slope = {"error": str(exc), "t_min": t_min}
    try:
        cond = conditioning_report(stream.X, cfg.k).to_dict()
    except EnumerationTooLarge as exc:
        cond = {"error": str(exc)}

    final = ledger.checkpoints[-1]
    summary = {
        "algorithm": exp.algorithm,
        "T": cfg.T,
        "final_t": final[0],
        "cum_loss": final[1],
        "comparator_loss": final[2],
        "regret": final[3],
        "slope": slope,
        "max_play_support": int(max((np.count_nonzero(w) for w in played.plays), default=0)),
        "max_queried": int(max(len(q) for q in played.queried)),
        "conditioning": cond,
        "details": played.details,
    }
    if w_star is not None:
        summary["w_star"] = w_star
        summary["w_star_cum_loss"] = float(np.sum((stream.y - stream.X @ w_star) ** 2))
    result = ExperimentResult(exp.echo(), ledger.checkpoints, summary)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        files = {"trace": out / "trace.csv", "checkpoints": out / "checkpoints.csv",
                 "summary": out / "summary.json", "stream": out / "stream.txt"}
        write_table(files["trace"], TRACE_HEADER, _trace_rows(played, stream))
        write_table(files["checkpoints"], CHECKPOINT_HEADER, ledger.checkpoints)
        write_json(files["summary"], {"config": result.config, "summary": summary})
        write_stream(files["stream"], stream)
        result.files = {k: str(v) for k, v in files.items()}
    result.wall_clock = time.perf_counter() - started
    log.info("%s finished in %.2fs, regret %.6g", exp.algorithm, result.wall_clock, final[3])
    return result


def run_experiment(config_path, out_dir=None, seed: Optional[int] = None,
                   checkpoints=None) -> ExperimentResult:
    exp = load_config(config_path)
    if seed is not None:
        exp = ExperimentConfig(exp.problem.replace(seed=seed), exp.algorithm, exp.checkpoints, exp.out_dir)
    if checkpoints is not None:
        exp = ExperimentConfig(exp.problem, exp.algorithm, checkpoints, exp.out_dir)
    target = out_dir if out_dir is not None else exp.out_dir
    return execute(exp, target)


def ledger_from_files(trace_path, stream_path, k: int, checkpoints) -> RegretLedger:
    """Recompute a regret ledger from a persisted trace and stream."""
    header, rows = read_table(trace_path)
    losses = np.array([float(r[header.index("loss")]) for r in rows])
    return compute_regret(losses, read_stream(stream_path), k, checkpoints)
