"""Budgeted experts: follow one expert, observe the losses of a small set containing it.

Exponential weights mixed with uniform exploration. The observation set is the
followed expert plus m - 1 others drawn uniformly without replacement, and
observed losses are importance-weighted by their exact inclusion probability.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .errors import LossOutOfRange


@dataclass
class BexpState:
    d: int
    m: int
    eta: float
    gamma: float
    horizon: int
    log_weights: np.ndarray = None
    t: int = 0

    def __post_init__(self):
        if not 1 <= self.m <= self.d:
            raise ValueError("need 1 <= m <= d")
        if not self.eta > 0:
            raise ValueError("eta must be positive")
        if not 0 <= self.gamma <= 1:
            raise ValueError("gamma must lie in [0, 1]")
        if self.log_weights is None:
            self.log_weights = np.zeros(self.d)

    @classmethod
    def create(cls, d: int, m: int, horizon: int, eta: Optional[float] = None,
               gamma: Optional[float] = None) -> "BexpState":
        horizon = max(int(horizon), 1)
        log_d = math.log(d) if d > 1 else 1.0
        if eta is None:
            eta = math.sqrt(m * log_d / (d * horizon))
        if gamma is None:
            gamma = 0.0 if m == d else min(1.0, math.sqrt(d * log_d / (m * horizon)))
        return cls(d, m, eta, gamma, horizon)

    def copy(self) -> "BexpState":
        return BexpState(self.d, self.m, self.eta, self.gamma, self.horizon,
                         self.log_weights.copy(), self.t)


def follow_probabilities(state: BexpState) -> np.ndarray:
    z = state.log_weights - state.log_weights.max()
    p = np.exp(z)
    p /= p.sum()
    return (1.0 - state.gamma) * p + state.gamma / state.d


def inclusion_probabilities(state: BexpState) -> np.ndarray:
    """Pr[j ∈ U] for every expert j."""
    p = follow_probabilities(state)
    if state.m == state.d:
        return np.ones(state.d)
    return p + (1.0 - p) * (state.m - 1) / (state.d - 1)


def bexp_select(state: BexpState, rng: np.random.Generator) -> tuple[int, np.ndarray]:
    """Return the followed expert j and its sorted observation set U (0-based)."""
    p = follow_probabilities(state)
    j = int(min(np.searchsorted(np.cumsum(p), rng.random() * p.sum(), side="right"), state.d - 1))
    if state.m == state.d:
        return j, np.arange(state.d)
    others = np.delete(np.arange(state.d), j)
    extra = rng.choice(others, size=state.m - 1, replace=False) if state.m > 1 else []
    return j, np.sort(np.concatenate([[j], extra]).astype(np.intp))


def loss_estimates(state: BexpState, observed: Mapping[int, float]) -> np.ndarray:
    """Importance-weighted loss vector: l_j / Pr[j ∈ U] on U, zero elsewhere."""
    q = inclusion_probabilities(state)
    est = np.zeros(state.d)
    for j, loss in observed.items():
        if not (-1e-12 <= loss <= 1.0 + 1e-12) or math.isnan(loss):
            raise LossOutOfRange(f"loss {loss!r} for expert {j} outside [0, 1]")
        est[int(j)] = min(max(loss, 0.0), 1.0) / q[int(j)]
    return est


def bexp_update(state: BexpState, observed: Mapping[int, float]) -> BexpState:
    """Exponential-weights step on the estimated losses (in place)."""
    state.log_weights -= state.eta * loss_estimates(state, observed)
    state.t += 1
    return state
