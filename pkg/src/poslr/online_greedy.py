"""Mini-batch online greedy learner: budgeted experts pick features, VAW predicts."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bexp import BexpState, bexp_select, bexp_update
from .core_types import ProblemConfig, as_stream
from .rng import substream
from .supermodular import BatchSetFunction
from .vaw import VawState, vaw_predict, vaw_update

log = logging.getLogger(__name__)


def schedule_params(cfg: ProblemConfig, kappa: Optional[float] = None) -> tuple[int, int, list[int]]:
    """Batch length, number of expert instances and per-instance budgets.

    Explicit ``cfg.B`` / ``cfg.k1`` override the horizon-derived defaults.
    """
    kappa = cfg.kappa if kappa is None else kappa
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    T, d, k, k0 = cfg.T, cfg.d, cfg.k, cfg.k0
    if cfg.B is None:
        B = int(round((k0 * T / (kappa ** 2 * d * k)) ** (1.0 / 3.0)))
        B = min(max(B, 1), T)
    else:
        B = cfg.B
    if cfg.k1 is None:
        k1 = max(1, int(round(kappa ** 2 * k * math.log(T) / 3.0))) if T > 1 else 1
        k1 = min(max(k1, 1), k0)
    else:
        k1 = cfg.k1
    base, extra = divmod(k0, k1)
    budgets = [base + (1 if i < extra else 0) for i in range(k1)]
    return B, k1, budgets


@dataclass
class GreedyBatchState:
    b: int
    start: int
    length: int
    chosen: list[int]
    sets: list[np.ndarray]
    nested: list[tuple[int, ...]]         # V^(0), ..., V^(k1)
    query: np.ndarray
    feedback: list[dict] = field(default_factory=list)


@dataclass
class Algorithm2Trace:
    plays: np.ndarray
    predictions: np.ndarray
    losses: np.ndarray
    batches: list[GreedyBatchState]
    B: int
    k1: int
    budgets: list[int]
    clipped_feedback: int = 0

    def query_set(self, t: int) -> np.ndarray:
        """S_t for a 1-based round t."""
        return self.batches[(t - 1) // self.B].query

    @property
    def masks(self) -> list[np.ndarray]:
        out = []
        for batch in self.batches:
            out.extend([batch.query] * batch.length)
        return out


def run_algorithm2(stream, cfg: ProblemConfig, rng: Optional[np.random.Generator] = None,
                   kappa: Optional[float] = None) -> Algorithm2Trace:
    stream = as_stream(stream)
    X, y = stream.X, stream.y
    T, d = X.shape
    B, k1, budgets = schedule_params(cfg.replace(T=T), kappa)
    if rng is None:
        rng = substream(cfg.seed, "bexp")
    n_batches = math.ceil(T / B)
    experts = [BexpState.create(d, m, n_batches) for m in budgets]

    plays = np.zeros((T, d))
    predictions = np.zeros(T)
    losses = np.zeros(T)
    batches = []
    clipped = 0
    for b in range(n_batches):
        start = b * B
        stop = min(start + B, T)
        chosen, sets = [], []
        for state in experts:
            j, U = bexp_select(state, rng)
            chosen.append(j)
            sets.append(U)
        nested = [()]
        for j in chosen:
            nested.append(tuple(sorted(set(nested[-1]) | {j})))
        query = np.unique(np.concatenate(sets))
        batch = GreedyBatchState(b, start, stop - start, chosen, sets, nested, query)

        V = list(nested[-1])
        vaw = VawState(len(V), cfg.vaw_reg)
        for t in range(start, stop):
            xV = X[t, V]
            y_hat, w = vaw_predict(vaw, xV)
            plays[t, V] = w
            predictions[t] = y_hat
            losses[t] = (y[t] - y_hat) ** 2
            vaw_update(vaw, xV, y[t])

        # only the queried coordinates ever enter the set function
        X_obs = np.zeros((stop - start, d))
        X_obs[:, query] = X[start:stop, query]
        g = BatchSetFunction(X_obs, y[start:stop])
        for i, state in enumerate(experts):
            observed = {}
            for j in sets[i]:
                val = g.value(set(nested[i]) | {int(j)})
                if not 0.0 <= val <= 1.0:
                    if val < -1e-12 or val > 1.0 + 1e-12:
                        clipped += 1
                    val = min(max(val, 0.0), 1.0)
                observed[int(j)] = val
            batch.feedback.append(observed)
            bexp_update(state, observed)
        batches.append(batch)
    if clipped:
        log.warning("%d set-function losses fell outside [0, 1] and were clipped", clipped)
    return Algorithm2Trace(plays, predictions, losses, batches, B, k1, budgets, clipped)
