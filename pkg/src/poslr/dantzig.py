"""Masked-feature Dantzig selector and the doubling-schedule learner built on it."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core_types import LabeledExample, MaskedObservation, ProblemConfig, SparseWeight
from .errors import Infeasible, NumericalFailure, PoslrError
from .estimator import (EstimatorState, accumulate, debiased_gram, residual,
                        sample_mask, unbiased_estimate)
from .rng import substream
from .simplex import linprog_simplex

log = logging.getLogger(__name__)

FEAS_TOL = 1e-8


@dataclass
class DantzigSolution:
    w_hat: np.ndarray
    l1_value: float
    lam: float
    iterations: int
    max_violation: float


def lambda_threshold(t: int, cfg: ProblemConfig) -> float:
    """C sqrt(d log(t d / delta) / (t k0)) (sigma + d / k0), natural log."""
    if t < 1:
        raise ValueError("t must be >= 1")
    d, k0 = cfg.d, cfg.k0
    return cfg.c_lambda * math.sqrt(d * math.log(t * d / cfg.delta) / (t * k0)) * (cfg.sigma + d / k0)


def solve_dantzig(state: EstimatorState, lam: float,
                  max_iter: Optional[int] = None) -> DantzigSolution:
    """Minimise ||w||_1 subject to ||residual(state, w)||_inf <= lam.

    Split w = u - v with u, v >= 0; the two-sided sup-norm bound becomes 2d
    inequality rows over 2d variables.
    """
    if state.t < 1:
        raise ValueError("estimator state is empty")
    if not lam > 0:
        raise ValueError("lambda must be positive")
    d = state.d
    M = debiased_gram(state) / state.t
    r0 = state.b_hat / state.t
    A = np.block([[-M, M], [M, -M]])
    b = np.concatenate([lam - r0, lam + r0])
    res = linprog_simplex(np.ones(2 * d), A, b, max_iter=max_iter)
    if res.status == "infeasible":
        raise Infeasible(f"no w satisfies the residual bound at lambda={lam:.6g}")
    if res.status != "optimal":
        raise NumericalFailure(f"simplex stopped with status {res.status} after {res.nit} pivots")
    w = res.x[:d] - res.x[d:]
    violation = float(np.max(np.abs(residual(state, w))) - lam)
    if violation > FEAS_TOL:
        raise NumericalFailure(f"solution violates the constraint by {violation:.3g}")
    return DantzigSolution(w, float(np.abs(w).sum()), lam, res.nit, max(violation, 0.0))


def top_k(w_hat: np.ndarray, k: int) -> SparseWeight:
    """Keep the k largest-magnitude entries; equal magnitudes favour the smaller index."""
    w_hat = np.asarray(w_hat, dtype=float)
    if not 1 <= k <= w_hat.size:
        raise ValueError("need 1 <= k <= d")
    order = np.argsort(-np.abs(w_hat), kind="stable")
    out = np.zeros_like(w_hat)
    keep = order[:k]
    out[keep] = w_hat[keep]
    return SparseWeight(out)


def is_power_of_two(t: int) -> bool:
    return t >= 1 and t & (t - 1) == 0


@dataclass
class Algorithm1Trace:
    plays: np.ndarray                 # T x d, row t-1 is w_t
    masks: list[np.ndarray]
    predictions: np.ndarray
    losses: np.ndarray
    solve_rounds: list[int] = field(default_factory=list)
    lambdas: list[float] = field(default_factory=list)
    w_hats: list[np.ndarray] = field(default_factory=list)
    failed_rounds: list[tuple[int, str]] = field(default_factory=list)
    estimation_errors: list[float] = field(default_factory=list)
    truncated_errors: list[float] = field(default_factory=list)
    t0: int = 0

    def changed_rounds(self) -> list[int]:
        """Rounds (1-based) at which the play differs from the previous round."""
        prev = np.zeros(self.plays.shape[1])
        out = []
        for t, w in enumerate(self.plays, start=1):
            if not np.array_equal(w, prev):
                out.append(t)
            prev = w
        return out


def run_algorithm1(stream: Sequence[LabeledExample], cfg: ProblemConfig,
                   w_star: Optional[np.ndarray] = None,
                   rng: Optional[np.random.Generator] = None) -> Algorithm1Trace:
    """Play zero through the warm-up, then re-solve at every power of two."""
    T = len(stream)
    if T < 1:
        raise ValueError("empty stream")
    d, k, k0 = cfg.d, cfg.k, cfg.k0
    t0 = cfg.resolved_t0()
    if rng is None:
        rng = substream(cfg.seed, "masks")
    state = EstimatorState(d, k0, cfg.mask_mode)
    trace = Algorithm1Trace(np.zeros((T, d)), [], np.zeros(T), np.zeros(T), t0=t0)
    w = np.zeros(d)
    for t, ex in enumerate(stream, start=1):
        if t > t0 and is_power_of_two(t):
            if state.t == 0:
                trace.failed_rounds.append((t, "no observations yet"))
            else:
                lam = lambda_threshold(state.t, cfg)
                try:
                    sol = solve_dantzig(state, lam)
                except PoslrError as exc:
                    log.warning("round %d: Dantzig solve failed (%s); keeping previous play", t, exc)
                    trace.failed_rounds.append((t, f"{type(exc).__name__}: {exc}"))
                else:
                    w = top_k(sol.w_hat, k).w
                    trace.solve_rounds.append(t)
                    trace.lambdas.append(lam)
                    trace.w_hats.append(sol.w_hat)
                    if w_star is not None:
                        trace.estimation_errors.append(float(np.linalg.norm(sol.w_hat - w_star)))
                        trace.truncated_errors.append(float(np.linalg.norm(w - w_star)))
        trace.plays[t - 1] = w
        y_hat = float(ex.x @ w)
        trace.predictions[t - 1] = y_hat
        trace.losses[t - 1] = (ex.y - y_hat) ** 2
        mask = sample_mask(rng, d, k0, cfg.mask_mode)
        trace.masks.append(mask)
        obs = MaskedObservation.observe(t, ex.x, ex.y, mask)
        accumulate(state, unbiased_estimate(obs, d, k0), obs.y)
    return trace
